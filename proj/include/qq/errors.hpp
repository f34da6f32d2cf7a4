#pragma once

#include <stdexcept>
#include <string>

namespace qq {

/// Raised when an exact division leaves a remainder.
class NotDivisible : public std::runtime_error {
  public:
    explicit NotDivisible(const std::string &what)
        : std::runtime_error("not divisible: " + what) {}
};

/// An operation needs the rank r (e.g. reordering Delta past A) but none was given.
class RankRequired : public std::logic_error {
  public:
    explicit RankRequired(const std::string &what)
        : std::logic_error("rank required: " + what) {}
};

class UnsupportedParams : public std::invalid_argument {
  public:
    explicit UnsupportedParams(const std::string &what)
        : std::invalid_argument("unsupported parameters: " + what) {}
};

} // namespace qq
