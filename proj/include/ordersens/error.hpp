#ifndef ORDERSENS_ERROR_HPP
#define ORDERSENS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ordersens {

/// Malformed or out-of-contract input: bad files, unknown ids, exceeded caps.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A resource cap (node count, path count, enumeration width) was exceeded.
class CapExceeded : public InputError {
public:
    using InputError::InputError;
};

/// A mathematical precondition does not hold: a set is not an ideal, a
/// diamond field is not cube-consistent, a path is not supported, ...
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ordersens

#endif
