#pragma once

#include <stdexcept>
#include <string>

namespace qmine {

// Base class for all pipeline errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration value (negative cap, tau <= 0, ...).
class config_error : public error {
public:
    using error::error;
};

// Malformed or inconsistent input to an operation.
class input_error : public error {
public:
    using error::error;
};

// A dataset fails validation (missing teacher labels, label outside class set, ...).
class dataset_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

// External-service errors (harvester, teacher).
class credential_error : public error {
public:
    using error::error;
};

class not_found_error : public error {
public:
    using error::error;
};

class rate_limit_error : public error {
public:
    using error::error;
};

// Teacher response could not be parsed; carries the raw payload for diagnosis.
class annotation_error : public error {
public:
    annotation_error(const std::string& msg, std::string payload)
        : error(msg), raw_payload(std::move(payload)) {}
    std::string raw_payload;
};

class generation_error : public error {
public:
    using error::error;
};

}  // namespace qmine
