/** \file  errors.hpp
 *  \brief Exception hierarchy shared by every lca module.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lca {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// core model
class IntegrityError : public Error {
public:
    IntegrityError(const std::string &offending_id, const std::string &what)
        : Error(what), offending_id_(offending_id) {}
    const std::string &offending_id() const noexcept { return offending_id_; }

private:
    std::string offending_id_;
};

class InvalidValueError : public Error {
public:
    using Error::Error;
};

// identifiers
class IsbnFormatError : public Error {
public:
    using Error::Error;
};

class IsbnChecksumError : public Error {
public:
    using Error::Error;
};

class NotConvertibleError : public Error {
public:
    using Error::Error;
};

class KeyError : public Error {
public:
    using Error::Error;
};

// ingest
class ParseError : public Error {
public:
    using Error::Error;
};

class DatasetError : public Error {
public:
    DatasetError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// catalog client
class QuotaError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    TransportError(const std::string &what, int status = 0) : Error(what), status_(status) {}
    /// HTTP status, or 0 when no response was received.
    int status() const noexcept { return status_; }

private:
    int status_;
};

class StartupError : public Error {
public:
    using Error::Error;
};

// indicators
class LookupError : public Error {
public:
    using Error::Error;
};

class UndefinedRateError : public Error {
public:
    using Error::Error;
};

class NoClassError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// stats
class SampleSizeError : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

} // namespace lca
