#pragma once

#include <stdexcept>
#include <string>

namespace susyq {

// A model or operator failed a structural check (nilpotency, parity,
// projector axioms, Hermiticity, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computed quantity failed an internal consistency check (index not an
// integer, PSD spectrum with a negative eigenvalue, overflow guard, ...).
class NumericalIntegrityError : public std::runtime_error {
public:
    explicit NumericalIntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace susyq
