#include "trustmesh/errors.hpp"

#include <sstream>

namespace trustmesh {

std::string format_line_errors(const std::vector<LineError>& errors) {
    std::ostringstream out;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) out << '\n';
        out << "line " << errors[i].line << ": " << errors[i].message;
    }
    return out.str();
}

}  // namespace trustmesh
