#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace polarkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: out-of-range parameters, bad lengths, unparsable files.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A mathematical precondition does not hold (singular kernel, channel
// without an output symmetry where one is required).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// An exact computation would exceed the configured output-alphabet or
// blocklength cap. `achieved_level` is set when a multi-level recursion
// got partway before hitting the cap.
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what, std::optional<std::size_t> achieved_level = std::nullopt)
        : Error(what), achieved_level_(achieved_level) {}

    std::optional<std::size_t> achieved_level() const noexcept { return achieved_level_; }

private:
    std::optional<std::size_t> achieved_level_;
};

}  // namespace polarkit
