#pragma once

#include <stdexcept>
#include <string>

namespace sheetaudit {

/// Base class for every error the library reports out-of-band.
/// In-grid evaluation failures are Value errors, not exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Formula text could not be parsed; offset is the character position
/// in the original source (including the leading '=').
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Grid file rejected; carries the 1-based grid row and field column.
class LoadError : public Error {
public:
    LoadError(const std::string& what, int row, int column)
        : Error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
          row_(row), column_(column) {}
    explicit LoadError(const std::string& what) : Error(what), row_(0), column_(0) {}
    int row() const { return row_; }
    int column() const { return column_; }

private:
    int row_;
    int column_;
};

/// A constrained random draw (seed plan, pairing) cannot be satisfied.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Inputs that must belong together do not (wrong reference model,
/// wrong workbook identity, manifest built against different content).
class MismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace sheetaudit
