#pragma once

#include <vector>

#include "tatlab/types.hpp"

namespace tatlab {

/// Sparse multivariate polynomial with integer exponents. Closed under
/// differentiation, which is why scenario files define custom fields as
/// coefficient tables instead of expression strings.
class Polynomial {
public:
    struct Term {
        double coeff = 0.0;
        std::vector<int> powers;  // one exponent per variable
    };

    Polynomial() = default;
    Polynomial(int nvars, std::vector<Term> terms);

    static Polynomial zero(int nvars) { return Polynomial(nvars, {}); }
    static Polynomial constant(int nvars, double c);
    /// Single monomial c * prod_a p_a^powers[a].
    static Polynomial monomial(int nvars, double c, std::vector<int> powers);

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double eval(const Vec& p) const;
    Polynomial derivative(int axis) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial scaled(double factor) const;

    /// Coefficients in canonical (sorted-exponent) term order; the parameter
    /// vector of a polynomial field is the concatenation of these.
    std::vector<double> coefficients() const;
    /// Same terms, new coefficients (canonical order).
    Polynomial with_coefficients(const std::vector<double>& coeffs) const;

private:
    void canonicalize();

    int nvars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace tatlab
