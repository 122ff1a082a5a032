#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ellq {

using cplx = std::complex<double>;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A product factor or bracket came too close to zero; callers resample.
class pole_proximity : public error {
public:
    using error::error;
};
class non_convergent : public error {
public:
    using error::error;
};
class domain_error : public error {
public:
    using error::error;
};
class invalid_params : public error {
public:
    using error::error;
};
class zero_mode : public error {
public:
    using error::error;
};
class annulus_violation : public error {
public:
    using error::error;
};
class fusion_degenerate : public error {
public:
    using error::error;
};
class dim_mismatch : public error {
public:
    using error::error;
};
class bad_generator : public error {
public:
    using error::error;
};

struct truncation_policy {
    int order = 40;
    double tol = 1e-9;
    double pole_tol = 1e-6;
};

// q, r and the level c; everything else is derived through the fixed
// principal log of q.
template <class T>
class basic_params {
public:
    using complex_type = std::complex<T>;

    basic_params(complex_type q, complex_type r, complex_type c = complex_type(0))
        : q_(q), r_(r), c_(c) {
        if (q == complex_type(0) || std::abs(q) >= T(1))
            throw invalid_params("need 0 < |q| < 1");
        lq_ = std::log(q);
        p_ = std::exp(T(2) * r_ * lq_);
        ps_ = (c_ == complex_type(0)) ? p_ : std::exp(T(2) * (r_ - c_) * lq_);
        if (std::abs(p_) >= T(1) || std::abs(ps_) >= T(1))
            throw invalid_params("need |p| < 1 and |p*| < 1");
    }

    complex_type q() const { return q_; }
    complex_type r() const { return r_; }
    complex_type c() const { return c_; }
    complex_type rstar() const { return r_ - c_; }
    complex_type log_q() const { return lq_; }
    complex_type p() const { return p_; }
    complex_type pstar() const { return ps_; }

    // q^a on the fixed branch
    complex_type qpow(complex_type a) const { return std::exp(a * lq_); }

    // r -> r* everywhere (p -> p*)
    basic_params starred() const { return basic_params(q_, r_ - c_, complex_type(0)); }

    template <class U>
    basic_params<U> convert() const {
        using cu = std::complex<U>;
        return basic_params<U>(cu(U(q_.real()), U(q_.imag())), cu(U(r_.real()), U(r_.imag())),
                               cu(U(c_.real()), U(c_.imag())));
    }

private:
    complex_type q_, r_, c_;
    complex_type lq_, p_, ps_;
};

using elliptic_params = basic_params<double>;

}  // namespace ellq
