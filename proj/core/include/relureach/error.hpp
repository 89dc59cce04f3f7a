/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relureach {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
  public:
    DimensionError(const std::string & what, std::size_t expected, std::size_t actual)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got "
                + std::to_string(actual)),
          expected_(expected),
          actual_(actual)
    {
    }

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

  private:
    std::size_t expected_;
    std::size_t actual_;
};

class NonFiniteError : public Error
{
  public:
    using Error::Error;
};

/// Shape inconsistency between two consecutive layers of a network.
class ShapeError : public Error
{
  public:
    ShapeError(const std::string & what, std::size_t first_layer, std::size_t second_layer)
        : Error(what), first_layer_(first_layer), second_layer_(second_layer)
    {
    }

    std::size_t first_layer() const noexcept { return first_layer_; }
    std::size_t second_layer() const noexcept { return second_layer_; }

  private:
    std::size_t first_layer_;
    std::size_t second_layer_;
};

/// Syntax or schema error in one of the text inputs. Line and column are
/// 1-based; 0 means unknown.
class ParseError : public Error
{
  public:
    ParseError(const std::string & message, std::size_t line, std::size_t column,
               std::string field = {})
        : Error(format(message, line, column, field)),
          line_(line),
          column_(column),
          field_(std::move(field))
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string & field() const noexcept { return field_; }

  private:
    static std::string format(const std::string & message, std::size_t line,
                              std::size_t column, const std::string & field)
    {
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line);
            if (column > 0) out += ", column " + std::to_string(column);
            out += ": ";
        }
        if (!field.empty()) out += "'" + field + "': ";
        return out + message;
    }

    std::size_t line_;
    std::size_t column_;
    std::string field_;
};

/// Raised when the input set leaves a ReLU pre-activation unbounded, so no
/// finite big-M constant exists.
class UnboundedInputError : public Error
{
  public:
    using Error::Error;
};

} // namespace relureach
