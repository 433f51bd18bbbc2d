#include "tatlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tatlab {

Polynomial::Polynomial(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
    if (nvars_ < 1) throw ConfigError("polynomial: nvars must be >= 1");
    for (const auto& t : terms_) {
        if (static_cast<int>(t.powers.size()) != nvars_)
            throw ConfigError("polynomial: term exponent count != nvars");
        for (int e : t.powers)
            if (e < 0) throw ConfigError("polynomial: negative exponent");
    }
    canonicalize();
}

Polynomial Polynomial::constant(int nvars, double c) {
    return monomial(nvars, c, std::vector<int>(nvars, 0));
}

Polynomial Polynomial::monomial(int nvars, double c, std::vector<int> powers) {
    return Polynomial(nvars, {Term{c, std::move(powers)}});
}

void Polynomial::canonicalize() {
    std::map<std::vector<int>, double> merged;
    for (const auto& t : terms_) merged[t.powers] += t.coeff;
    terms_.clear();
    for (auto& [powers, coeff] : merged)
        if (coeff != 0.0) terms_.push_back(Term{coeff, powers});
}

double Polynomial::eval(const Vec& p) const {
    if (p.size() != nvars_) throw ConfigError("polynomial: eval dimension mismatch");
    double sum = 0.0;
    for (const auto& t : terms_) {
        double m = t.coeff;
        for (int a = 0; a < nvars_; ++a) {
            const int e = t.powers[a];
            if (e == 0) continue;
            double base = p[a], acc = 1.0;
            for (int q = e; q > 0; q >>= 1, base *= base)
                if (q & 1) acc *= base;
            m *= acc;
        }
        sum += m;
    }
    return sum;
}

Polynomial Polynomial::derivative(int axis) const {
    if (axis < 0 || axis >= nvars_) throw ConfigError("polynomial: derivative axis out of range");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.powers[axis] == 0) continue;
        Term d = t;
        d.coeff *= t.powers[axis];
        d.powers[axis] -= 1;
        out.push_back(std::move(d));
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    if (other.nvars_ != nvars_) throw ConfigError("polynomial: nvars mismatch in +");
    std::vector<Term> out = terms_;
    out.insert(out.end(), other.terms_.begin(), other.terms_.end());
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    return *this + other.scaled(-1.0);
}

Polynomial Polynomial::scaled(double factor) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= factor;
    return Polynomial(nvars_, std::move(out));
}

std::vector<double> Polynomial::coefficients() const {
    std::vector<double> c;
    c.reserve(terms_.size());
    for (const auto& t : terms_) c.push_back(t.coeff);
    return c;
}

Polynomial Polynomial::with_coefficients(const std::vector<double>& coeffs) const {
    if (coeffs.size() != terms_.size())
        throw ConfigError("polynomial: coefficient count mismatch in rebind");
    std::vector<Term> out = terms_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].coeff = coeffs[i];
    return Polynomial(nvars_, std::move(out));
}

}  // namespace tatlab
