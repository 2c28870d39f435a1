#pragma once

#include <stdexcept>
#include <string>

namespace mrcmix {

// Adaptive integration ran out of subdivisions before reaching the
// requested tolerance. Carries what was actually achieved so callers can
// decide whether the partial result is usable.
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double requested, double achieved)
        : std::runtime_error(what), requested_tol_(requested), achieved_tol_(achieved) {}

    double requested_tol() const noexcept { return requested_tol_; }
    double achieved_tol() const noexcept { return achieved_tol_; }

private:
    double requested_tol_;
    double achieved_tol_;
};

// f(0) and f(1) have the same sign, so no root of the CCDF gap is
// bracketed inside [0, 1].
class no_bracket_error : public std::runtime_error {
public:
    no_bracket_error(const std::string& what, double f_at_zero, double f_at_one)
        : std::runtime_error(what), f_at_zero_(f_at_zero), f_at_one_(f_at_one) {}

    double f_at_zero() const noexcept { return f_at_zero_; }
    double f_at_one() const noexcept { return f_at_one_; }

private:
    double f_at_zero_;
    double f_at_one_;
};

// Input combination makes the requested quantity unidentifiable
// (e.g. B = 0 makes the CCDF gap vanish identically).
class degenerate_input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Too few usable trials survived filtering to form an estimate.
class insufficient_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mrcmix
