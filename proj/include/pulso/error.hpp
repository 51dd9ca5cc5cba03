#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pulso {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LexiconError : public Error {
public:
    using Error::Error;
};

class RuleError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class StatsError : public Error {
public:
    using Error::Error;
};

// national_shares with no positive single-candidate tweets
class UndefinedShareError : public Error {
public:
    using Error::Error;
};

// nothing survived the ingest filter
class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

}  // namespace pulso
