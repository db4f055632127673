#ifndef HTN_ERROR_H
#define HTN_ERROR_H

#include <stdexcept>
#include <string>

namespace htn {

// Position of a parsed node in its source text. Lines and columns are 1-based.
struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
    int end_line = 0;
    int end_column = 0;

    std::string to_string() const;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const SourceSpan &span, const std::string &message);

    const SourceSpan &span() const { return span_; }

private:
    SourceSpan span_;
};

class TypingError : public Error {
public:
    using Error::Error;
};

class GroundingError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace htn

#endif
