#pragma once

#include <stdexcept>
#include <string>

namespace bellkit {

/// Enumeration request exceeds the configured strategy budget. The CLI maps
/// this to exit code 2.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// An internal cross-check failed (imaginary residue too large, mismatched
/// evaluation paths, construction overlap). The CLI maps this to exit code 3.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bellkit
