#pragma once

#include <stdexcept>
#include <string>

namespace hybridex {

/// Malformed document or file (JSON, CSV, catalog).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed input that violates a model or configuration invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The simulated debug bridge is down; the session cannot accept input.
class DisconnectedError : public std::runtime_error {
public:
    DisconnectedError() : std::runtime_error("device disconnected (adb off)") {}
};

/// The app crashed while crashes were not being ignored.
class AppCrashedError : public std::runtime_error {
public:
    AppCrashedError() : std::runtime_error("app crashed and was not relaunched") {}
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hybridex
