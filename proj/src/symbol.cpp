#include "cimfrac/symbol.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "cimfrac/errors.hpp"

namespace cimfrac {

namespace {
constexpr double kPi = std::numbers::pi;
}

KernelValue kernel(Complex z, const FractionalOrders& orders) {
    if (z == Complex(0.0, 0.0)) throw SingularPoint("kernel at z = 0");
    Complex za = std::pow(z, orders.alpha);
    Complex m = std::pow(z, orders.sum()) / (za + 1.0);
    return {z, m, 1.0 + 1.0 / za};
}

bool sector_check(Complex z, const FractionalOrders& orders) {
    if (z == Complex(0.0, 0.0)) throw SingularPoint("sector check at z = 0");
    bool inside = std::abs(std::arg(z)) < orders.sector_angle();
#ifdef CIMFRAC_SECTOR_ASSERTS
    if (inside) {
        double zeta = std::max(orders.beta / orders.sum(), 1.0) *
                      (orders.sum() + orders.epsilon) * kPi / 2.0;
        if (zeta < kPi)
            assert(std::abs(std::arg(kernel(z, orders).m)) < zeta);
    }
#endif
    return inside;
}

void PowerLawSource::add(std::vector<double> profile, double coefficient,
                         double exponent) {
    if (!(exponent > -1.0))
        throw DomainError("power-law exponent must exceed -1");
    terms.push_back({std::move(profile), coefficient, exponent});
}

TransformedSource transform_source(const PowerLawSource& src) {
    TransformedSource out;
    for (const auto& t : src.terms) {
        if (!(t.exponent > -1.0))
            throw DomainError("power-law exponent must exceed -1");
        out.size_ = std::max(out.size_, t.profile.size());
        out.terms_.push_back({t.profile, t.coefficient * std::tgamma(t.exponent + 1.0),
                              -t.exponent - 1.0});
    }
    return out;
}

void TransformedSource::evaluate_into(Complex z, std::vector<Complex>& out) const {
    out.assign(size_, Complex(0.0, 0.0));
    if (callback_) {
        callback_(z, out);
        return;
    }
    for (const auto& term : terms_) {
        Complex scale = term.weight * std::pow(z, term.exponent);
        for (std::size_t i = 0; i < term.profile.size(); ++i)
            out[i] += scale * term.profile[i];
    }
}

std::vector<Complex> TransformedSource::evaluate(Complex z) const {
    std::vector<Complex> out;
    evaluate_into(z, out);
    return out;
}

Complex scalar_resolvent(Complex z, const FractionalOrders& orders, double u0,
                         Complex fhat) {
    KernelValue k = kernel(z, orders);
    Complex denom = k.m + 1.0;
    if (std::abs(denom) < 1e-300)
        throw ResolventSingular("m(z) + 1 vanished; z outside the sector?");
    return (k.m / z * u0 + k.m / std::pow(z, orders.beta) * fhat) / denom;
}

}  // namespace cimfrac
