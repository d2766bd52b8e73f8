#include "reebsym/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace reebsym {

namespace {

constexpr double kHalf = 0.5;
constexpr double kGridTol = 1e-12;

double lerp(double x0, double y0, double x1, double y1, double x) {
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

EvenProfile::EvenProfile() : z_{0.0, kHalf}, value_{0.0, 0.0} {}

EvenProfile EvenProfile::from_breakpoints(std::vector<double> z, std::vector<double> value) {
    if (z.size() != value.size() || z.size() < 2)
        throw DomainError("profile needs matching z/value lists with at least 2 breakpoints");
    if (std::abs(z.front()) > kGridTol || std::abs(z.back() - kHalf) > kGridTol)
        throw DomainError("profile breakpoints must span [0, 1/2]");
    z.front() = 0.0;
    z.back() = kHalf;
    for (std::size_t i = 1; i < z.size(); ++i)
        if (!(z[i] > z[i - 1]))
            throw DomainError("profile breakpoints must be strictly increasing");
    EvenProfile u;
    u.z_ = std::move(z);
    u.value_ = std::move(value);
    return u;
}

double EvenProfile::eval(double z) const {
    double a = std::abs(z);
    if (a > kHalf + kGridTol)
        throw DomainError("profile evaluated outside [-1/2, 1/2] at z=" + std::to_string(z));
    a = std::min(a, kHalf);
    auto it = std::upper_bound(z_.begin(), z_.end(), a);
    std::size_t i = static_cast<std::size_t>(it - z_.begin());
    if (i == 0) return value_.front();
    if (i == z_.size()) return value_.back();
    return lerp(z_[i - 1], value_[i - 1], z_[i], value_[i], a);
}

double EvenProfile::integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < z_.size(); ++i)
        s += (z_[i] - z_[i - 1]) * (value_[i] + value_[i - 1]) * 0.5;
    return 2.0 * s;
}

double EvenProfile::max_value() const { return *std::max_element(value_.begin(), value_.end()); }
double EvenProfile::min_value() const { return *std::min_element(value_.begin(), value_.end()); }

double EvenProfile::sup_abs() const {
    return std::max(std::abs(max_value()), std::abs(min_value()));
}

EvenProfile EvenProfile::scaled(double t) const {
    EvenProfile u = *this;
    for (double& v : u.value_) v *= t;
    return u;
}

EvenProfile EvenProfile::add(const EvenProfile& a, const EvenProfile& b) {
    return sum({a, b});
}

EvenProfile EvenProfile::sum(const std::vector<EvenProfile>& parts) {
    if (parts.empty()) return EvenProfile();
    std::vector<double> grid;
    for (const auto& p : parts) grid.insert(grid.end(), p.z_.begin(), p.z_.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> vals(grid.size(), 0.0);
    for (const auto& p : parts) {
        std::size_t j = 0;  // walk each part once; grids are sorted
        for (std::size_t i = 0; i < grid.size(); ++i) {
            while (j + 1 < p.z_.size() && p.z_[j + 1] <= grid[i]) ++j;
            if (p.z_[j] == grid[i])
                vals[i] += p.value_[j];
            else
                vals[i] += lerp(p.z_[j], p.value_[j], p.z_[j + 1], p.value_[j + 1], grid[i]);
        }
    }
    EvenProfile u;
    u.z_ = std::move(grid);
    u.value_ = std::move(vals);
    return u;
}

double EvenProfile::sup_distance(const EvenProfile& other) const {
    EvenProfile d = add(*this, other.scaled(-1.0));
    return d.sup_abs();
}

double EvenProfile::sup_abs_on(double a, double b) const {
    double m = std::max(std::abs(eval(a)), std::abs(eval(b)));
    for (std::size_t i = 0; i < z_.size(); ++i)
        if (z_[i] > a && z_[i] < b) m = std::max(m, std::abs(value_[i]));
    return m;
}

LinkSpec::LinkSpec(int k_, double B_) : k(k_), B(B_) {
    if (k < 1) throw BadK("link size k must be >= 1");
    if (std::abs(B - kHalf) <= kGridTol) B = kHalf;
    double lo = 1.0 / (k + 1);
    if (!(B > lo) || !(B <= kHalf))
        throw DomainError("link base B must lie in (1/(k+1), 1/2]");
}

double LinkSpec::spacing() const {
    if (k == 1) return 0.0;
    return (1.0 - 2.0 * B) / (k - 1);
}

std::vector<double> LinkSpec::points() const {
    std::vector<double> p(static_cast<std::size_t>(k));
    double c = spacing();
    for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(j)] = -kHalf + B + j * c;
    return p;
}

double ik_half_width(int k) {
    if (k < 2) throw BadK("I_k requires k >= 2");
    return kHalf - 1.0 / (k + 1);
}

double norm_k(const EvenProfile& u, int k) {
    double zk = ik_half_width(k);
    return u.sup_abs_on(0.0, zk) + (2.0 / k) * u.sup_abs_on(zk, kHalf);
}

double link_average(const EvenProfile& u, const LinkSpec& spec) {
    double s = 0.0;
    for (double p : spec.points()) s += u.eval(p);
    return s / spec.k;
}

double reconstruct_via_links(const EvenProfile& u, double z, int k) {
    if (k < 3) throw BadK("link reconstruction requires k >= 3");
    double za = std::abs(z);
    if (!(za < kHalf - 1.0 / (k + 1)))
        throw DomainError("|z| must be below 1/2 - 1/(k+1) for the chosen k");
    double B = kHalf - za;
    // B + C computed as 1/2 - z(k-3)/(k-1) so that k = 3 lands exactly on 1/2
    double BC = kHalf - za * (static_cast<double>(k - 3) / (k - 1));
    double a = link_average(u, LinkSpec(k, B));
    double b = link_average(u, LinkSpec(k - 2, BC));
    return 0.5 * k * a - 0.5 * (k - 2) * b;
}

}  // namespace reebsym
