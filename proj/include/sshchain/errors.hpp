#pragma once

#include <stdexcept>
#include <string>

namespace sshchain {

/// Parameter combination defines no valid chain (Favard positivity violated,
/// negative coupling radicand, degenerate grid, ...). Distinct from plain
/// domain errors so callers can treat it as "skip" rather than "abort".
class admissibility_error : public std::domain_error {
public:
    explicit admissibility_error(const std::string& what) : std::domain_error(what) {}
};

/// An iterative routine exhausted its budget (bisection interval, inverse
/// iteration, infinite product truncation).
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sshchain
