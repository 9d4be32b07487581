#include "cubic/automorphic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace cubic {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t gcd(std::int64_t a, std::int64_t b) { return gcd64(a, b); }

}  // namespace

double hecke_check(const MaassFormData& data) {
    const auto N = std::int64_t(data.size());
    double worst = 0;
    for (std::int64_t m = 1; m <= N; ++m) {
        for (std::int64_t n = m; m * n <= N; ++n) {
            const std::int64_t g = gcd(m, n);
            double rhs = 0;
            for (std::int64_t d = 1; d <= g; ++d)
                if (g % d == 0) rhs += data.rho(std::size_t(m * n / (d * d)));
            worst = std::max(worst, std::abs(data.rho(std::size_t(m)) * data.rho(std::size_t(n)) - rhs));
        }
    }
    return worst;
}

void validate(const MaassFormData& data) {
    using K = ParseError::Kind;
    if (!(data.t_phi > 0) || !std::isfinite(data.t_phi)) throw ParseError(K::BadValue, "t_phi must be positive");
    if (!(data.stated_precision >= 0) || !std::isfinite(data.stated_precision))
        throw ParseError(K::BadValue, "precision must be a non-negative number");
    if (data.coeffs.empty()) throw ParseError(K::BadValue, "no coefficients");
    for (double c : data.coeffs)
        if (!std::isfinite(c)) throw ParseError(K::BadValue, "non-finite coefficient");
    if (std::abs(data.coeffs[0] - 1) > std::max(data.stated_precision, 1e-12))
        throw ParseError(K::Normalization, "rho(1) must equal 1 (Hecke normalization)");
    for (std::size_t n = 1; n <= data.size(); ++n) {
        if (std::abs(data.rho(n)) > 2 * std::pow(double(n), 7.0 / 64 + 0.01))
            throw ParseError(K::BoundViolation, "coefficient bound |rho(n)| <= 2 n^(7/64+0.01) fails at n = " +
                                                    std::to_string(n));
    }
    const double h = hecke_check(data);
    const double tol = std::max(10 * data.stated_precision, 1e-6);
    if (h > tol) {
        std::ostringstream os;
        os << "Hecke relations violated: max deviation " << h << " exceeds " << tol;
        throw ParseError(K::HeckeViolation, os.str());
    }
}

namespace {

// sum_{n > N} 4 sqrt(y) n^0.12 K_0(2 pi n y) with K_0(x) <= sqrt(pi / 2x) e^-x.
double maass_tail(double y, int N) {
    double tail = 0;
    for (int n = N + 1;; ++n) {
        const double x = 2 * kPi * n * y;
        const double term = 4 * std::sqrt(y) * std::pow(double(n), 0.12) * std::sqrt(kPi / (2 * x)) * std::exp(-x);
        tail += term;
        if (term < 1e-30 * tail || term == 0 || n > N + 100000) break;
    }
    return tail;
}

}  // namespace

int maass_terms_needed(double mu, double y, double tol) {
    if (!(y > 0)) throw DomainError("maass_terms_needed: y must be positive");
    const double target = tol * std::exp(-kPi * std::abs(mu) / 2);
    int N = 1;
    while (maass_tail(y, N) > target) {
        N = N < 8 ? N + 1 : N + N / 8;
        if (N > 1000000) throw DomainError("maass_terms_needed: height too small");
    }
    return std::max(N, 10);
}

Evaluation eval_maass(const MaassFormData& data, const HalfPlanePoint& z, int terms) {
    if (!(z.y > 0)) throw DomainError("eval_maass: point not in the upper half-plane");
    const int need = terms > 0 ? terms : maass_terms_needed(data.t_phi, z.y);
    if (std::size_t(need) > data.size())
        throw ShortfallError("eval_maass: coefficient table too short; need N >= " + std::to_string(need), need);
    const double sy = std::sqrt(z.y);
    double sum = 0;
    for (int n = 1; n <= need; ++n) {
        const double k = bessel_k_imag(data.t_phi, 2 * kPi * n * z.y).value;
        const double arg = 2 * kPi * n * z.x;
        sum += data.rho(std::size_t(n)) * k * (data.parity == Parity::Even ? std::cos(arg) : std::sin(arg));
    }
    return {cplx(2 * sy * sum, 0), 2 * sy * maass_tail(z.y, need) / 2, need};
}

cplx eta(cplx z, std::int64_t m) {
    if (m < 1) throw DomainError("eta: m must be positive");
    const double lm = std::log(double(m));
    cplx s = 0;
    for (std::int64_t d = 1; d * d <= m; ++d) {
        if (m % d) continue;
        s += std::exp(0.5 * z * (2 * std::log(double(d)) - lm));
        if (d * d != m) s += std::exp(0.5 * z * (2 * std::log(double(m / d)) - lm));
    }
    return s;
}

EisensteinSeries::EisensteinSeries(cplx z, bool include_constant) : z_(z), constant_(include_constant) {
    if (std::abs(z) < 1e-14) throw DomainError("Eisenstein series: z = 0 is excluded");
    if (std::abs(z - 1.0) < 1e-14 || std::abs(z + 1.0) < 1e-14)
        throw DomainError("Eisenstein series: z = +-1 meets a pole of xi");
    xi_z_ = xi(z);
    xi_z1_ = xi(z + 1.0);
}

Evaluation EisensteinSeries::operator()(const HalfPlanePoint& p) const {
    if (!(p.y > 0)) throw DomainError("Eisenstein series: point not in the upper half-plane");
    const double t = std::sqrt(p.y);
    const cplx nu = 0.5 * z_;
    const bool imaginary = nu.real() == 0;
    const cplx pref = 4 * t / xi_z1_;
    const double apref = std::abs(pref);
    const double are = std::abs(z_.real()) / 2;
    cplx sum = 0;
    double tail = 0;
    int m = 1;
    for (;; ++m) {
        const double x = 2 * kPi * m * p.y;
        // |eta(m)| <= d(m) m^{|Re z|/2} <= 2 sqrt(m) m^{|Re z|/2}
        const double bound = apref * 2 * std::sqrt(double(m)) * std::pow(double(m), are) *
                             (imaginary ? bessel_k_imag(0, x).value : bessel_k_abs_bound(nu.real(), x));
        if (m > 1 && bound < 1e-17) {
            tail = 2 * bound;
            break;
        }
        if (m > 100000) throw ShortfallError("Eisenstein series: too many Fourier terms at this height", m);
        const cplx k = imaginary ? cplx(bessel_k_imag(nu.imag(), x).value, 0) : bessel_k(nu, x);
        sum += eta(z_, m) * k * std::cos(2 * kPi * m * p.x);
    }
    cplx v = pref * sum;
    if (constant_) v += std::pow(t, z_ + 1.0) + std::pow(t, 1.0 - z_) * xi_z_ / xi_z1_;
    return {v, tail, m - 1};
}

Evaluation eval_eisenstein(cplx z, const HalfPlanePoint& point, bool include_constant) {
    return EisensteinSeries(z, include_constant)(point);
}

TestFunction TestFunction::maass(MaassFormData data) {
    validate(data);
    return TestFunction(std::make_shared<const MaassFormData>(std::move(data)));
}

TestFunction TestFunction::eisenstein(cplx z, bool include_constant) {
    if (!(z.real() == 0 || z.real() > 1))
        throw DomainError("Eisenstein test function needs Re z = 0 or Re z > 1");
    return TestFunction(EisensteinSeries(z, include_constant));
}

std::string TestFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (is_constant()) return "const";
    if (auto m = std::get_if<std::shared_ptr<const MaassFormData>>(&v_)) {
        os << "maass(t_phi=" << (*m)->t_phi << ",parity=" << ((*m)->parity == Parity::Even ? "even" : "odd")
           << ",N=" << (*m)->size() << ")";
        return os.str();
    }
    const auto& e = std::get<EisensteinSeries>(v_);
    os << "eisenstein(z=" << e.z().real() << (e.z().imag() < 0 ? "" : "+") << e.z().imag() << "i"
       << (e.include_constant() ? ",with constant term" : ",constant term removed") << ")";
    return os.str();
}

cplx TestFunction::at(const HalfPlanePoint& p) const {
    if (is_constant()) return 1.0;
    if (auto m = std::get_if<std::shared_ptr<const MaassFormData>>(&v_)) return eval_maass(**m, p).value;
    return std::get<EisensteinSeries>(v_)(p).value;
}

cplx eval_testfunction(const TestFunction& phi, const RealMatrix2& g) {
    if (!(g.det() > 0)) throw DomainError("eval_testfunction: determinant must be positive");
    if (phi.is_constant()) return 1.0;
    return phi.at(reduce_fundamental(to_halfplane(g)).point);
}

MaassFormData synthetic_maass(std::size_t N, std::uint64_t seed, double t_phi, Parity parity) {
    if (N < 1) throw DomainError("synthetic_maass: N must be positive");
    std::mt19937_64 rng(seed);
    std::vector<double> rho(N + 1, 0.0);
    rho[1] = 1;
    std::vector<std::size_t> spf(N + 1, 0);  // smallest prime factor
    for (std::size_t p = 2; p <= N; ++p) {
        if (spf[p]) continue;
        for (std::size_t q = p; q <= N; q += p)
            if (!spf[q]) spf[q] = p;
        // Dyadic seeds in [-1, 1] keep every product exact in double precision.
        const double s = double(std::int64_t(rng() % 9) - 4) / 4;
        double prev = 1, cur = s;
        for (std::size_t pk = p; pk <= N; pk *= p) {
            rho[pk] = cur;
            const double next = s * cur - prev;
            prev = cur;
            cur = next;
            if (pk > N / p) break;
        }
    }
    for (std::size_t n = 2; n <= N; ++n) {
        const std::size_t p = spf[n];
        std::size_t pk = p;
        while ((n / pk) % p == 0) pk *= p;
        if (pk != n) rho[n] = rho[pk] * rho[n / pk];
    }
    MaassFormData d;
    d.t_phi = t_phi;
    d.parity = parity;
    d.coeffs.assign(rho.begin() + 1, rho.end());
    d.stated_precision = 0;
    return d;
}

}  // namespace cubic
