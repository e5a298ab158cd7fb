#pragma once

#include <stdexcept>
#include <string>

namespace gbandit {

/// A violation of the graphical-bandit model: disconnected graphs, pulls on
/// non-adjacent node pairs, invalid paths.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation requested on a data structure in a state that does not allow it.
class InvalidStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Rejected user input (reward vectors, parameters, configs).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read or written; the message names the file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gbandit
