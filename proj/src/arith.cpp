#include "tel/arith.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tel/errors.hpp"

namespace tel::arith {

namespace {

// Montgomery arithmetic mod an odd p < 2^63: products stay exact while the
// per-step cost is two 64x64 multiplies instead of a hardware division.
struct Montgomery {
    uint64_t p;
    uint64_t pinv_neg;  // -p^{-1} mod 2^64
    uint64_t one;       // 2^64 mod p
    uint64_t r2;        // 2^128 mod p

    explicit Montgomery(uint64_t mod) : p(mod) {
        uint64_t inv = p;
        for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
        pinv_neg = ~inv + 1;
        one = static_cast<uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
        r2 = static_cast<uint64_t>(static_cast<unsigned __int128>(one) * one % p);
    }

    uint64_t redc(unsigned __int128 t) const {
        uint64_t m = static_cast<uint64_t>(t) * pinv_neg;
        uint64_t v = static_cast<uint64_t>((t + static_cast<unsigned __int128>(m) * p) >> 64);
        return v >= p ? v - p : v;
    }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return redc(static_cast<unsigned __int128>(a) * b);
    }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint64_t to(uint64_t x) const { return mul(x % p, r2); }
    uint64_t from(uint64_t x) const { return redc(x); }
};

void require_prime(uint32_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

uint64_t poly_eval_mod(const std::vector<uint64_t>& coeffs_mod, uint64_t x, uint64_t p) {
    uint64_t acc = 0;
    for (auto it = coeffs_mod.rbegin(); it != coeffs_mod.rend(); ++it)
        acc = (static_cast<unsigned __int128>(acc) * x + *it) % p;
    return acc;
}

std::vector<uint64_t> reduce_coeffs(const std::vector<Int>& coeffs, uint64_t p) {
    std::vector<uint64_t> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        Int r = c % Int(static_cast<unsigned long>(p));
        if (r < 0) r += Int(static_cast<unsigned long>(p));
        out.push_back(r.get_ui());
    }
    return out;
}

// Visits spec(x) mod p for x = 0 .. p-1 in order.
template <typename Fn>
void scan_values_mod(const PseudoPolySpec& spec, uint32_t p, Fn&& visit) {
    if (spec.is_builtin()) {
        if (p < 16) {
            uint64_t f = 1 % p;
            visit(f);
            for (uint32_t x = 1; x < p; ++x) {
                f = (static_cast<uint64_t>(x) * f + 1) % p;
                visit(f);
            }
            return;
        }
        Montgomery m(p);
        uint64_t f = m.one;  // F(0) = 1
        uint64_t xm = 0;
        visit(m.from(f));
        for (uint32_t x = 1; x < p; ++x) {
            xm = m.add(xm, m.one);
            f = m.add(m.mul(xm, f), m.one);
            visit(m.from(f));
        }
        return;
    }
    auto cm = reduce_coeffs(spec.coefficients(), p);
    for (uint32_t x = 0; x < p; ++x) visit(poly_eval_mod(cm, x, p));
}

// Zero count only: avoids the from-Montgomery conversion in the hot loop
// (zero is zero in either representation).
uint32_t rho_builtin(uint32_t p) {
    if (p < 16) {
        uint32_t zeros = 0;
        uint64_t f = 1 % p;
        if (f == 0) ++zeros;
        for (uint32_t x = 1; x < p; ++x) {
            f = (static_cast<uint64_t>(x) * f + 1) % p;
            if (f == 0) ++zeros;
        }
        return zeros;
    }
    Montgomery m(p);
    uint64_t f = m.one;
    uint64_t xm = 0;
    uint32_t zeros = 0;
    for (uint32_t x = 1; x < p; ++x) {
        xm = m.add(xm, m.one);
        f = m.add(m.mul(xm, f), m.one);
        zeros += (f == 0);
    }
    return zeros;
}

// Four primes advance in lockstep; the independent recurrence chains hide
// the reduction latency that a single chain serializes. Lanes fall back to
// scalar stepping once the common prefix ends. Requires all p >= 17.
void rho_builtin_batch4(const uint32_t p[4], uint32_t zeros[4]) {
    Montgomery m0(p[0]), m1(p[1]), m2(p[2]), m3(p[3]);
    uint64_t f0 = m0.one, f1 = m1.one, f2 = m2.one, f3 = m3.one;
    uint64_t x0 = 0, x1 = 0, x2 = 0, x3 = 0;
    uint32_t z0 = 0, z1 = 0, z2 = 0, z3 = 0;
    uint32_t pmin = std::min(std::min(p[0], p[1]), std::min(p[2], p[3]));
    for (uint32_t x = 1; x < pmin; ++x) {
        x0 = m0.add(x0, m0.one);
        x1 = m1.add(x1, m1.one);
        x2 = m2.add(x2, m2.one);
        x3 = m3.add(x3, m3.one);
        f0 = m0.add(m0.mul(x0, f0), m0.one);
        f1 = m1.add(m1.mul(x1, f1), m1.one);
        f2 = m2.add(m2.mul(x2, f2), m2.one);
        f3 = m3.add(m3.mul(x3, f3), m3.one);
        z0 += (f0 == 0);
        z1 += (f1 == 0);
        z2 += (f2 == 0);
        z3 += (f3 == 0);
    }
    auto finish = [pmin](const Montgomery& m, uint64_t f, uint64_t xm, uint32_t p_i,
                         uint32_t z) {
        for (uint32_t x = pmin; x < p_i; ++x) {
            xm = m.add(xm, m.one);
            f = m.add(m.mul(xm, f), m.one);
            z += (f == 0);
        }
        return z;
    };
    zeros[0] = finish(m0, f0, x0, p[0], z0);
    zeros[1] = finish(m1, f1, x1, p[1], z1);
    zeros[2] = finish(m2, f2, x2, p[2], z2);
    zeros[3] = finish(m3, f3, x3, p[3], z3);
}

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct KahanComplex {
    Kahan re, im;
    void add(std::complex<double> v) {
        re.add(v.real());
        im.add(v.imag());
    }
    std::complex<double> value() const { return {re.sum, im.sum}; }
};

std::vector<uint32_t> value_histogram(const PseudoPolySpec& spec, uint32_t p) {
    std::vector<uint32_t> c(p, 0);
    scan_values_mod(spec, p, [&](uint64_t v) { ++c[static_cast<size_t>(v)]; });
    return c;
}

struct RootTable {
    std::vector<long double> cos_v, sin_v;
    explicit RootTable(uint32_t p) : cos_v(p), sin_v(p) {
        const long double tau = 6.283185307179586476925286766559005768L;
        for (uint32_t v = 0; v < p; ++v) {
            long double t = tau * static_cast<long double>(v) / static_cast<long double>(p);
            cos_v[v] = cosl(t);
            sin_v[v] = sinl(t);
        }
    }
};

// W from the value histogram: sum_v c[v] e(a v / p) / sqrt(p).
std::complex<double> w_from_histogram(const std::vector<uint32_t>& c, const RootTable& roots,
                                      uint32_t p, uint64_t a) {
    long double re = 0.0L, im = 0.0L;
    size_t idx = 0;
    size_t step = static_cast<size_t>(a % p);
    for (uint32_t v = 0; v < p; ++v) {
        if (c[v]) {
            long double w = static_cast<long double>(c[v]);
            re += w * roots.cos_v[idx];
            im += w * roots.sin_v[idx];
        }
        idx += step;
        if (idx >= p) idx -= p;
    }
    long double norm = sqrtl(static_cast<long double>(p));
    return {static_cast<double>(re / norm), static_cast<double>(im / norm)};
}

void accumulate_power_terms(std::vector<KahanComplex>& acc, std::complex<double> w,
                            int max_order) {
    size_t stride = static_cast<size_t>(max_order) + 1;
    std::vector<std::complex<double>> wa(stride), wb(stride);
    wa[0] = wb[0] = 1.0;
    for (int k = 1; k <= max_order; ++k) {
        wa[static_cast<size_t>(k)] = wa[static_cast<size_t>(k) - 1] * w;
        wb[static_cast<size_t>(k)] = wb[static_cast<size_t>(k) - 1] * std::conj(w);
    }
    for (int j = 0; j <= max_order; ++j)
        for (int k = 0; j + k <= max_order; ++k)
            acc[static_cast<size_t>(j) * stride + static_cast<size_t>(k)].add(
                wa[static_cast<size_t>(j)] * wb[static_cast<size_t>(k)]);
}

measures::MomentTable table_from_sums(const std::vector<std::complex<double>>& sums,
                                      int max_order, uint64_t denom) {
    auto table = measures::MomentTable::empirical_complex(max_order, denom);
    size_t stride = static_cast<size_t>(max_order) + 1;
    double inv = 1.0 / static_cast<double>(denom);
    for (int j = 0; j <= max_order; ++j)
        for (int k = 0; j + k <= max_order; ++k)
            table.set_value(j, k,
                            sums[static_cast<size_t>(j) * stride + static_cast<size_t>(k)] * inv);
    return table;
}

}  // namespace

PseudoPolySpec PseudoPolySpec::builtin_f() { return PseudoPolySpec(); }

PseudoPolySpec PseudoPolySpec::polynomial(std::vector<Int> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(Int(0));
    PseudoPolySpec s;
    s.builtin_ = false;
    s.coeffs_ = std::move(coeffs);
    return s;
}

PseudoPolySpec PseudoPolySpec::parse(const std::string& text) {
    if (text == "builtin-F" || text == "builtin-f" || text == "F") return builtin_f();
    const std::string prefix = "poly:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<Int> coeffs;
        std::string body = text.substr(prefix.size());
        if (body.empty()) throw std::invalid_argument("empty coefficient list");
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) throw std::invalid_argument("empty coefficient in " + text);
            coeffs.emplace_back(tok);
        }
        return polynomial(std::move(coeffs));
    }
    throw std::invalid_argument("unrecognized sequence spec: " + text +
                                " (expected builtin-F or poly:c0,c1,...)");
}

Int PseudoPolySpec::value(unsigned long n) const {
    if (builtin_) {
        Int f = 1;
        for (unsigned long k = 1; k <= n; ++k) f = Int(k) * f + 1;
        return f;
    }
    Int acc = 0;
    Int x(static_cast<unsigned long>(n));
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string PseudoPolySpec::label() const {
    if (builtin_) return "builtin-F";
    std::string s = "poly:";
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ',';
        s += coeffs_[i].get_str();
    }
    return s;
}

// ---- Primes ----

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void for_each_prime(uint64_t bound, const std::function<void(uint64_t)>& fn) {
    if (bound < 2) return;
    uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(bound)));
    while (root * root > bound) --root;
    while ((root + 1) * (root + 1) <= bound) ++root;

    std::vector<uint8_t> small(static_cast<size_t>(root) + 1, 1);
    std::vector<uint64_t> base;
    for (uint64_t i = 2; i <= root; ++i) {
        if (!small[static_cast<size_t>(i)]) continue;
        base.push_back(i);
        for (uint64_t j = i * i; j <= root; j += i) small[static_cast<size_t>(j)] = 0;
    }
    for (uint64_t p : base) fn(p);

    const uint64_t segment = 1 << 20;
    std::vector<uint8_t> sieve;
    for (uint64_t lo = root + 1; lo <= bound; lo += segment) {
        uint64_t hi = std::min(bound, lo + segment - 1);
        sieve.assign(static_cast<size_t>(hi - lo + 1), 1);
        for (uint64_t p : base) {
            uint64_t start = ((lo + p - 1) / p) * p;
            if (start < p * p) start = p * p;
            for (uint64_t j = start; j <= hi; j += p) sieve[static_cast<size_t>(j - lo)] = 0;
        }
        for (uint64_t i = lo; i <= hi; ++i)
            if (sieve[static_cast<size_t>(i - lo)]) fn(i);
    }
}

std::vector<uint32_t> primes_up_to(uint64_t bound) {
    std::vector<uint32_t> out;
    for_each_prime(bound, [&](uint64_t p) { out.push_back(static_cast<uint32_t>(p)); });
    return out;
}

uint64_t prime_count(uint64_t bound) {
    uint64_t n = 0;
    for_each_prime(bound, [&](uint64_t) { ++n; });
    return n;
}

// ---- Root counting ----

uint32_t rho(const PseudoPolySpec& spec, uint32_t p) {
    require_prime(p);
    if (spec.is_builtin()) return rho_builtin(p);
    uint32_t zeros = 0;
    scan_values_mod(spec, p, [&](uint64_t v) { zeros += (v == 0); });
    return zeros;
}

double RhoHistogram::fraction(int r) const {
    if (r < 0 || r > kMaxR + 1) throw std::out_of_range("histogram bucket");
    if (prime_total == 0) return 0.0;
    return static_cast<double>(counts[static_cast<size_t>(r)]) /
           static_cast<double>(prime_total);
}

double RhoHistogram::target(int r) {
    if (r < 0) throw std::out_of_range("histogram bucket");
    double f = 1.0;
    for (int i = 2; i <= r; ++i) f *= i;
    return std::exp(-1.0) / f;
}

std::string RhoHistogram::to_csv() const {
    std::ostringstream os;
    os << "r,count,fraction,target\n";
    os.precision(12);
    for (int r = 0; r <= kMaxR; ++r)
        os << r << ',' << counts[static_cast<size_t>(r)] << ',' << fraction(r) << ','
           << target(r) << '\n';
    os << "overflow," << counts[kMaxR + 1] << ',' << fraction(kMaxR + 1) << ",0\n";
    return os.str();
}

std::string RhoHistogram::to_json_string(const std::string& spec_label) const {
    nlohmann::json j;
    j["spec"] = spec_label;
    j["bound"] = bound;
    j["primes"] = prime_total;
    auto rows = nlohmann::json::array();
    for (int r = 0; r <= kMaxR; ++r)
        rows.push_back({{"r", r},
                        {"count", counts[static_cast<size_t>(r)]},
                        {"fraction", fraction(r)},
                        {"target", target(r)}});
    rows.push_back({{"r", "overflow"},
                    {"count", counts[kMaxR + 1]},
                    {"fraction", fraction(kMaxR + 1)}});
    j["rows"] = rows;
    return j.dump(2);
}

RhoHistogram rho_histogram(const PseudoPolySpec& spec, uint64_t bound, int threads) {
    RhoHistogram h;
    h.bound = bound;
    auto primes = primes_up_to(bound);
    h.prime_total = primes.size();
    if (threads < 1) threads = 1;
    threads = std::min<int>(threads, static_cast<int>(std::max<size_t>(primes.size(), 1)));

    // Work items are spans over the sorted prime list: singletons for the
    // primes the batch engine cannot take, runs of four otherwise.
    struct Span {
        size_t begin;
        size_t len;
    };
    std::vector<Span> spans;
    size_t i = 0;
    while (i < primes.size() && primes[i] < 17) spans.push_back({i++, 1});
    while (spec.is_builtin() && i + 4 <= primes.size()) {
        spans.push_back({i, 4});
        i += 4;
    }
    while (i < primes.size()) spans.push_back({i++, 1});

    std::vector<std::vector<uint64_t>> parts(
        static_cast<size_t>(threads), std::vector<uint64_t>(RhoHistogram::kMaxR + 2, 0));
    std::atomic<size_t> next{0};
    auto bucket = [](uint32_t r) {
        return static_cast<size_t>(std::min<uint32_t>(r, RhoHistogram::kMaxR + 1));
    };
    auto worker = [&](int tid) {
        auto& local = parts[static_cast<size_t>(tid)];
        for (;;) {
            size_t s = next.fetch_add(1);
            if (s >= spans.size()) return;
            auto [begin, len] = spans[s];
            if (len == 4) {
                uint32_t zeros[4];
                rho_builtin_batch4(&primes[begin], zeros);
                for (int k = 0; k < 4; ++k) ++local[bucket(zeros[k])];
            } else {
                ++local[bucket(rho(spec, primes[begin]))];
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (const auto& local : parts)
        for (size_t r = 0; r < local.size(); ++r) h.counts[r] += local[r];
    return h;
}

// ---- Exponential sums ----

std::complex<double> expsum_w(const PseudoPolySpec& spec, uint32_t p, uint64_t a) {
    require_prime(p);
    if (a % p == 0)
        throw std::invalid_argument("a must be nonzero mod p (W(0) is degenerately sqrt(p))");
    RootTable roots(p);
    uint64_t am = a % p;
    long double re = 0.0L, im = 0.0L;
    scan_values_mod(spec, p, [&](uint64_t v) {
        size_t idx = static_cast<size_t>(am * v % p);
        re += roots.cos_v[idx];
        im += roots.sin_v[idx];
    });
    long double norm = sqrtl(static_cast<long double>(p));
    return {static_cast<double>(re / norm), static_cast<double>(im / norm)};
}

measures::MomentTable expsum_moments_exact(const PseudoPolySpec& spec, uint32_t p,
                                           int max_order) {
    require_prime(p);
    if (max_order < 0) throw std::invalid_argument("negative moment order");
    if (size_guard_enabled() && p > 100000)
        throw SizeGuardError("exact moment mode refuses p > 100000; use the sampled mode");
    auto c = value_histogram(spec, p);
    RootTable roots(p);
    size_t stride = static_cast<size_t>(max_order) + 1;
    std::vector<KahanComplex> acc(stride * stride);
    for (uint64_t a = 1; a < p; ++a)
        accumulate_power_terms(acc, w_from_histogram(c, roots, p, a), max_order);
    std::vector<std::complex<double>> sums(stride * stride);
    for (size_t i = 0; i < sums.size(); ++i) sums[i] = acc[i].value();
    return table_from_sums(sums, max_order, p - 1);
}

measures::MomentTable expsum_moments_sampled(const PseudoPolySpec& spec, uint32_t p,
                                             int max_order, uint64_t count, uint64_t seed,
                                             int threads) {
    require_prime(p);
    if (max_order < 0) throw std::invalid_argument("negative moment order");
    if (count == 0) throw std::invalid_argument("sample count must be positive");
    auto c = value_histogram(spec, p);
    RootTable roots(p);
    size_t stride = static_cast<size_t>(max_order) + 1;
    auto parts = randomlab::run_trial_blocks<std::vector<std::complex<double>>>(
        count, seed, threads,
        [&](uint64_t begin, uint64_t end, randomlab::StreamRng& rng) {
            std::vector<KahanComplex> acc(stride * stride);
            for (uint64_t t = begin; t < end; ++t) {
                uint64_t a = rng.below(p - 1) + 1;
                accumulate_power_terms(acc, w_from_histogram(c, roots, p, a), max_order);
            }
            std::vector<std::complex<double>> sums(stride * stride);
            for (size_t i = 0; i < sums.size(); ++i) sums[i] = acc[i].value();
            return sums;
        });
    std::vector<std::complex<double>> total(stride * stride, 0.0);
    for (const auto& part : parts)
        for (size_t i = 0; i < part.size(); ++i) total[i] += part[i];
    return table_from_sums(total, max_order, count);
}

// ---- Hall divisibility ----

bool hall_check_sequence(const std::vector<Int>& values) {
    for (size_t m = 1; m < values.size(); ++m)
        for (size_t n = 0; n < m; ++n) {
            Int diff = values[m] - values[n];
            if (!mpz_divisible_ui_p(diff.get_mpz_t(), static_cast<unsigned long>(m - n)))
                return false;
        }
    return true;
}

bool hall_check(const PseudoPolySpec& spec, int n_max) {
    if (n_max < 0) throw std::invalid_argument("negative range");
    std::vector<Int> values;
    values.reserve(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) values.push_back(spec.value(static_cast<unsigned long>(n)));
    return hall_check_sequence(values);
}

}  // namespace tel::arith
