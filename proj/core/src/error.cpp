#include "azlab/error.hpp"

namespace azlab {

void throw_config(const std::string& what) { throw Error(ErrorKind::config, what); }
void throw_numeric(const std::string& what) { throw Error(ErrorKind::numeric, what); }
void throw_io(const std::string& what) { throw Error(ErrorKind::io, what); }

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::config: return 1;
    case ErrorKind::numeric: return 2;
    case ErrorKind::io: return 3;
    }
    return 2;
}

}  // namespace azlab
