#pragma once

#include <vector>

#include "reebsym/errors.hpp"

namespace reebsym {

/// Even, continuous, piecewise-linear function on [-1/2, 1/2], stored as
/// breakpoints on [0, 1/2] and evaluated at negative z by reflection.
class EvenProfile {
public:
    // Zero profile.
    EvenProfile();

    // z strictly increasing with z.front() == 0 and z.back() == 1/2.
    static EvenProfile from_breakpoints(std::vector<double> z, std::vector<double> value);

    double eval(double z) const;

    const std::vector<double>& grid() const { return z_; }
    const std::vector<double>& values() const { return value_; }

    double integral() const;  // over [-1/2, 1/2]
    double max_value() const;
    double min_value() const;
    double osc() const { return max_value() - min_value(); }
    double sup_abs() const;

    EvenProfile scaled(double t) const;

    static EvenProfile add(const EvenProfile& a, const EvenProfile& b);
    static EvenProfile sum(const std::vector<EvenProfile>& parts);

    double sup_distance(const EvenProfile& other) const;

    // sup over [a, b] of |u|, 0 <= a <= b <= 1/2 (attained at a breakpoint
    // or an interval end since u is PL).
    double sup_abs_on(double a, double b) const;

private:
    std::vector<double> z_, value_;
};

inline double osc(const EvenProfile& u) { return u.osc(); }
inline double integral(const EvenProfile& u) { return u.integral(); }
inline EvenProfile scale(const EvenProfile& u, double t) { return u.scaled(t); }
inline EvenProfile add(const EvenProfile& a, const EvenProfile& b) { return EvenProfile::add(a, b); }
inline double sup_distance(const EvenProfile& a, const EvenProfile& b) { return a.sup_distance(b); }

/// The k-point arithmetic set {-1/2 + B + jC}, j = 0..k-1, with spacing
/// C = (1-2B)/(k-1); symmetric about 0. For k = 1 only B = 1/2 is admissible
/// and the set is {0}.
struct LinkSpec {
    int k;
    double B;

    LinkSpec(int k, double B);
    double spacing() const;
    std::vector<double> points() const;
};

// I_k = [-1/2 + 1/(k+1), 1/2 - 1/(k+1)], k >= 2.
double ik_half_width(int k);

// max_{I_k} |u| + (2/k) max_{I \ I_k} |u|, suprema over closures.
double norm_k(const EvenProfile& u, int k);

double link_average(const EvenProfile& u, const LinkSpec& spec);

// (k/2) avg_{L_{k,B}} u - ((k-2)/2) avg_{L_{k-2,B+C}} u with B = 1/2 - |z|;
// equals u(z) for every even PL u. Requires k >= 3 and |z| < 1/2 - 1/(k+1).
double reconstruct_via_links(const EvenProfile& u, double z, int k);

}  // namespace reebsym
