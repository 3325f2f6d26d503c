#pragma once

#include <stdexcept>
#include <string>

namespace statleak {

// Base class for all library errors. Subclasses name the failure mode;
// the message carries the detail (file, line number, offending value).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyStream : public Error {
public:
    explicit EmptyStream(const std::string& what = "empty byte stream") : Error(what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    // Line number for text inputs, byte offset for binary ones.
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class BadCorpusLayout : public Error {
public:
    explicit BadCorpusLayout(const std::string& what) : Error(what) {}
};

class EmptyClass : public Error {
public:
    explicit EmptyClass(const std::string& what) : Error(what) {}
};

class BadAttribute : public Error {
public:
    explicit BadAttribute(const std::string& what) : Error(what) {}
};

class EmptyDataset : public Error {
public:
    explicit EmptyDataset(const std::string& what = "dataset has no instances") : Error(what) {}
};

class NotBinary : public Error {
public:
    explicit NotBinary(const std::string& what) : Error(what) {}
};

class BadParameter : public Error {
public:
    explicit BadParameter(const std::string& what) : Error(what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

}  // namespace statleak
