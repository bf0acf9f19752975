#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "cimfrac/contour.hpp"

namespace cimfrac {

using Complex = std::complex<double>;

/// Laplace-domain kernel values at one point z.
struct KernelValue {
    Complex z;
    Complex m;      ///< m(z) = z^(alpha+beta) / (z^alpha + 1)
    Complex shift;  ///< 1 + z^(-alpha), the coefficient multiplying A
};

/// Evaluate m(z) and the stiffness shift.  Principal branch throughout.
KernelValue kernel(Complex z, const FractionalOrders& orders);

/// True iff |arg z| < theta_tilde.  With CIMFRAC_SECTOR_ASSERTS defined this
/// also asserts that arg(m(z)) stays inside its sector when that sector is a
/// proper one (angle below pi).
bool sector_check(Complex z, const FractionalOrders& orders);

/// f(x,t) = sum_i coefficient_i * profile_i(x) * t^gamma_i with gamma_i > -1.
/// Profiles are held as already-projected FE coefficient vectors (a single
/// entry of 1.0 in scalar mode).
struct PowerLawSource {
    struct Term {
        std::vector<double> profile;
        double coefficient;
        double exponent;  ///< gamma, > -1
    };
    std::vector<Term> terms;

    void add(std::vector<double> profile, double coefficient, double exponent);
};

/// Laplace transform of a PowerLawSource: each term contributes
/// coefficient * Gamma(gamma+1) * z^(-gamma-1) * profile.  A user-supplied
/// callback may be attached instead for sources outside the power-law algebra.
class TransformedSource {
  public:
    using Callback = std::function<void(Complex z, std::vector<Complex>&)>;

    TransformedSource() = default;
    explicit TransformedSource(Callback cb, std::size_t size)
        : callback_(std::move(cb)), size_(size) {}

    /// f-hat(z) as a coefficient vector over the FE basis.
    std::vector<Complex> evaluate(Complex z) const;
    void evaluate_into(Complex z, std::vector<Complex>& out) const;

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    friend TransformedSource transform_source(const PowerLawSource& src);

  private:
    struct Bound {
        std::vector<double> profile;
        double weight;    ///< coefficient * Gamma(gamma+1)
        double exponent;  ///< -gamma-1
    };
    std::vector<Bound> terms_;
    Callback callback_;
    std::size_t size_ = 0;
};

TransformedSource transform_source(const PowerLawSource& src);

/// Closed-form resolvent of the scalar problem (A = 1):
/// (m(z)+1)^(-1) * ( m(z)/z * u0 + m(z)/z^beta * fhat ).
Complex scalar_resolvent(Complex z, const FractionalOrders& orders, double u0,
                         Complex fhat);

}  // namespace cimfrac
