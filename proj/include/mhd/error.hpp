#ifndef MHD_ERROR_HPP
#define MHD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mhd {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// bad sizes, mismatched grids or meshes between operands
struct SizeMismatchError : Error {
    using Error::Error;
};

// inverse transform asked to produce a real field from non-Hermitian data
struct SymmetryError : Error {
    using Error::Error;
};

// multiplier singular/non-finite at a mode carrying a nonzero coefficient
struct SingularSymbolError : Error {
    using Error::Error;
};

// argument outside an operation's contract (negative time, bad exponent, ...)
struct DomainError : Error {
    using Error::Error;
};

// unsupported parameter value (e.g. Lebesgue exponent outside the table)
struct UnsupportedError : Error {
    using Error::Error;
};

// adaptive quadrature could not reach the requested accuracy
struct AccuracyError : Error {
    using Error::Error;
};

// configuration file or value rejected
struct ConfigError : Error {
    using Error::Error;
};

// local-window search exhausted the mesh without meeting the smallness gate
struct NoLocalWindowError : Error {
    using Error::Error;
};

}  // namespace mhd

#endif
