#include "tel/randomlab.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tel/errors.hpp"

namespace tel::randomlab {

using combinatorics::CycleType;
using combinatorics::IntegerPartition;

namespace {

Int int128_to_int(unsigned __int128 v) {
    Int hi(static_cast<unsigned long>(v >> 64));
    Int lo(static_cast<unsigned long>(v));
    return (hi << 64) + lo;
}

int64_t pow_checked(int base, int exp) {
    int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<int64_t>::max() / base)
            throw std::overflow_error("fixed-space size exceeds int64");
        r *= base;
    }
    return r;
}

void fill_uniform_perm(std::vector<int>& p, StreamRng& rng) {
    std::iota(p.begin(), p.end(), 0);
    for (size_t i = p.size(); i > 1; --i)
        std::swap(p[i - 1], p[static_cast<size_t>(rng.below(i))]);
}

std::string partition_label(const IntegerPartition& lambda) {
    std::string s;
    for (size_t i = 0; i < lambda.parts().size(); ++i) {
        if (i) s += ',';
        s += std::to_string(lambda.parts()[i]);
    }
    return s.empty() ? "0" : s;
}

void require_trials(uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
}

}  // namespace

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
    for (const auto& [v, c] : other.histogram) histogram[v] += c;
    trials += other.trials;
}

Rat EmpiricalDistribution::exact_moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (trials == 0) throw std::logic_error("moment of an empty distribution");
    Int num = 0;
    for (const auto& [v, c] : histogram)
        num += Int(static_cast<unsigned long>(c)) * int_pow(Int(v), static_cast<unsigned long>(k));
    return Rat(num) / Rat(Int(static_cast<unsigned long>(trials)));
}

std::vector<int64_t> EmpiricalDistribution::support() const {
    std::vector<int64_t> out;
    out.reserve(histogram.size());
    for (const auto& [v, c] : histogram) out.push_back(v);
    return out;
}

measures::MomentTable EmpiricalDistribution::to_moment_table(int max_order) const {
    auto table = measures::MomentTable::empirical_real(max_order, trials);
    for (int a = 0; a <= max_order; ++a) table.set_value(a, moment(a));
    table.set_support(support());
    return table;
}

std::string EmpiricalDistribution::to_csv() const {
    std::ostringstream os;
    os << "value,count\n";
    for (const auto& [v, c] : histogram) os << v << ',' << c << '\n';
    return os.str();
}

std::string EmpiricalDistribution::to_json_string() const {
    nlohmann::json j;
    j["generator"] = generator;
    j["seed"] = seed;
    j["trials"] = trials;
    auto hist = nlohmann::json::array();
    for (const auto& [v, c] : histogram) hist.push_back({{"value", v}, {"count", c}});
    j["histogram"] = hist;
    auto moments = nlohmann::json::array();
    for (int k = 1; k <= 4 && trials > 0; ++k) {
        Rat m = exact_moment(k);
        moments.push_back({{"k", k}, {"exact", rat_to_string(m)}, {"value", rat_to_double(m)}});
    }
    j["moments"] = moments;
    return j.dump(2);
}

// ---- Symmetric group ----

std::vector<int> sample_permutation(int n, StreamRng& rng) {
    if (n < 0) throw std::invalid_argument("negative permutation size");
    std::vector<int> p(static_cast<size_t>(n));
    fill_uniform_perm(p, rng);
    return p;
}

int fix_count(const std::vector<int>& perm) {
    int fixed = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        if (perm[i] == static_cast<int>(i)) ++fixed;
    return fixed;
}

std::vector<int64_t> cycle_counts(const std::vector<int>& perm, int imax) {
    if (imax < 1) throw std::invalid_argument("imax must be positive");
    std::vector<int64_t> counts(static_cast<size_t>(imax), 0);
    std::vector<char> seen(perm.size(), 0);
    for (size_t start = 0; start < perm.size(); ++start) {
        if (seen[start]) continue;
        int len = 0;
        size_t at = start;
        while (!seen[at]) {
            seen[at] = 1;
            at = static_cast<size_t>(perm[at]);
            ++len;
        }
        if (len <= imax) ++counts[static_cast<size_t>(len - 1)];
    }
    return counts;
}

std::vector<Rat> exact_fix_distribution(int n) {
    if (n < 0) throw std::invalid_argument("negative permutation size");
    Rat total(factorial(static_cast<unsigned long>(n)));
    std::vector<Rat> probs;
    probs.reserve(static_cast<size_t>(n) + 1);
    for (int r = 0; r <= n; ++r)
        probs.push_back(Rat(combinatorics::rencontres(static_cast<unsigned>(n),
                                                      static_cast<unsigned>(r))) /
                        total);
    return probs;
}

Rat exact_fix_moment(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("negative argument");
    return Rat(combinatorics::partitions_with_at_most(static_cast<unsigned>(k),
                                                      static_cast<unsigned>(n)));
}

EmpiricalDistribution perm_fix_experiment(int n, uint64_t trials, uint64_t seed, int threads) {
    if (n < 0) throw std::invalid_argument("negative permutation size");
    require_trials(trials);
    auto parts = run_trial_blocks<EmpiricalDistribution>(
        trials, seed, threads, [n](uint64_t begin, uint64_t end, StreamRng& rng) {
            EmpiricalDistribution part;
            std::vector<int> perm(static_cast<size_t>(n));
            for (uint64_t t = begin; t < end; ++t) {
                fill_uniform_perm(perm, rng);
                part.add(fix_count(perm));
            }
            return part;
        });
    EmpiricalDistribution out;
    for (const auto& p : parts) out.merge(p);
    out.generator = "perm-fix n=" + std::to_string(n);
    out.seed = seed;
    return out;
}

namespace {

void gen_exponents(size_t pos, int remaining, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
    if (pos == cur.size()) {
        for (int k : cur)
            if (k > 0) {
                out.push_back(cur);
                return;
            }
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        cur[pos] = k;
        gen_exponents(pos + 1, remaining - k, cur, out);
    }
    cur[pos] = 0;
}

struct CyclePartial {
    std::vector<std::map<int64_t, uint64_t>> hists;
    std::vector<unsigned __int128> joint;
    uint64_t count = 0;
};

}  // namespace

CycleExperiment cycle_poisson_experiment(int n, int imax, uint64_t trials, uint64_t seed,
                                         int threads) {
    if (n < 1) throw std::invalid_argument("permutation size must be positive");
    if (imax < 1 || imax > n) throw std::invalid_argument("imax must lie in [1, n]");
    require_trials(trials);

    // Joint moments track only the first few cycle lengths; exponent vectors
    // over many coordinates would blow up combinatorially.
    int jmax = std::min(imax, 6);
    std::vector<std::vector<int>> exponents;
    {
        std::vector<int> cur(static_cast<size_t>(jmax), 0);
        gen_exponents(0, 4, cur, exponents);
    }

    auto parts = run_trial_blocks<CyclePartial>(
        trials, seed, threads, [&](uint64_t begin, uint64_t end, StreamRng& rng) {
            CyclePartial part;
            part.hists.resize(static_cast<size_t>(imax));
            part.joint.assign(exponents.size(), 0);
            std::vector<int> perm(static_cast<size_t>(n));
            for (uint64_t t = begin; t < end; ++t) {
                fill_uniform_perm(perm, rng);
                auto counts = cycle_counts(perm, imax);
                for (int i = 0; i < imax; ++i)
                    ++part.hists[static_cast<size_t>(i)][counts[static_cast<size_t>(i)]];
                for (size_t e = 0; e < exponents.size(); ++e) {
                    unsigned __int128 prod = 1;
                    for (int i = 0; i < jmax; ++i)
                        for (int r = 0; r < exponents[e][static_cast<size_t>(i)]; ++r)
                            prod *= static_cast<uint64_t>(counts[static_cast<size_t>(i)]);
                    part.joint[e] += prod;
                }
                ++part.count;
            }
            return part;
        });

    CycleExperiment out;
    out.n = n;
    out.imax = imax;
    out.trials = trials;
    out.seed = seed;
    out.per_cycle.resize(static_cast<size_t>(imax));
    for (int i = 0; i < imax; ++i) {
        auto& dist = out.per_cycle[static_cast<size_t>(i)];
        dist.generator = "cycle-count i=" + std::to_string(i + 1) + " n=" + std::to_string(n);
        dist.seed = seed;
    }
    std::vector<Int> sums(exponents.size(), Int(0));
    for (const auto& p : parts) {
        if (p.hists.empty()) continue;
        for (int i = 0; i < imax; ++i)
            for (const auto& [v, c] : p.hists[static_cast<size_t>(i)])
                out.per_cycle[static_cast<size_t>(i)].add(v, c);
        for (size_t e = 0; e < exponents.size(); ++e) sums[e] += int128_to_int(p.joint[e]);
    }
    Rat denom(Int(static_cast<unsigned long>(trials)));
    for (size_t e = 0; e < exponents.size(); ++e)
        out.joint_moments[exponents[e]] = Rat(sums[e]) / denom;
    return out;
}

// ---- Matrix groups over finite fields ----

FqMatrix sample_gl(int n, const FiniteField& f, StreamRng& rng) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    FqMatrix m(n, n);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (auto& e : m.data) e = static_cast<uint8_t>(rng.below(static_cast<uint64_t>(f.order())));
        if (fq_rank(f, m) == n) return m;
    }
    throw std::runtime_error("rejection sampling failed to produce an invertible matrix");
}

int64_t gl_fix_size(const FiniteField& f, const FqMatrix& g) {
    if (g.rows != g.cols) throw std::invalid_argument("square matrix required");
    int rank = fq_rank(f, fq_sub(f, g, FqMatrix::identity(g.rows)));
    return pow_checked(f.order(), g.rows - rank);
}

AffineMap sample_aff(int n, const FiniteField& f, StreamRng& rng) {
    AffineMap g;
    g.a = sample_gl(n, f, rng);
    g.b.resize(static_cast<size_t>(n));
    for (auto& e : g.b) e = static_cast<uint8_t>(rng.below(static_cast<uint64_t>(f.order())));
    return g;
}

int64_t aff_fix_size(const FiniteField& f, const AffineMap& g) {
    int n = g.a.rows;
    FqMatrix m = fq_sub(f, g.a, FqMatrix::identity(n));
    std::vector<uint8_t> rhs(g.b.size());
    for (size_t i = 0; i < g.b.size(); ++i) rhs[i] = f.neg(g.b[i]);
    if (!fq_solvable(f, m, rhs)) return 0;
    return pow_checked(f.order(), n - fq_rank(f, m));
}

namespace {

EmpiricalDistribution fix_experiment(const std::string& label, int n, int q, uint64_t trials,
                                     uint64_t seed, int threads, bool affine) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    require_trials(trials);
    FiniteField f(q);
    pow_checked(q, n);
    auto parts = run_trial_blocks<EmpiricalDistribution>(
        trials, seed, threads, [&](uint64_t begin, uint64_t end, StreamRng& rng) {
            EmpiricalDistribution part;
            for (uint64_t t = begin; t < end; ++t) {
                if (affine)
                    part.add(aff_fix_size(f, sample_aff(n, f, rng)));
                else
                    part.add(gl_fix_size(f, sample_gl(n, f, rng)));
            }
            return part;
        });
    EmpiricalDistribution out;
    for (const auto& p : parts) out.merge(p);
    out.generator = label + " n=" + std::to_string(n) + " q=" + std::to_string(q);
    out.seed = seed;
    return out;
}

// Advances a base-q odometer; false once it wraps to all zeros.
bool next_digits(std::vector<uint8_t>& d, int q) {
    for (auto& e : d) {
        if (static_cast<int>(e) + 1 < q) {
            ++e;
            return true;
        }
        e = 0;
    }
    return false;
}

void check_enumeration_size(int q, int exponent) {
    if (!size_guard_enabled()) return;
    double bits = exponent * std::log2(static_cast<double>(q));
    if (bits > 22.0)
        throw SizeGuardError("group enumeration over " + std::to_string(q) + "^" +
                             std::to_string(exponent) + " elements refused");
}

}  // namespace

EmpiricalDistribution gl_fix_experiment(int n, int q, uint64_t trials, uint64_t seed,
                                        int threads) {
    return fix_experiment("gl-fix", n, q, trials, seed, threads, false);
}

EmpiricalDistribution aff_fix_experiment(int n, int q, uint64_t trials, uint64_t seed,
                                         int threads) {
    return fix_experiment("aff-fix", n, q, trials, seed, threads, true);
}

EmpiricalDistribution gl_fix_exact(int n, int q) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    FiniteField f(q);
    check_enumeration_size(q, n * n);
    EmpiricalDistribution out;
    out.generator = "gl-exact n=" + std::to_string(n) + " q=" + std::to_string(q);
    FqMatrix m(n, n);
    std::vector<uint8_t> digits(static_cast<size_t>(n) * n, 0);
    do {
        m.data = digits;
        if (fq_rank(f, m) == n) out.add(gl_fix_size(f, m));
    } while (next_digits(digits, q));
    return out;
}

EmpiricalDistribution aff_fix_exact(int n, int q) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    FiniteField f(q);
    check_enumeration_size(q, n * n + n);
    EmpiricalDistribution out;
    out.generator = "aff-exact n=" + std::to_string(n) + " q=" + std::to_string(q);
    AffineMap g;
    g.a = FqMatrix(n, n);
    std::vector<uint8_t> digits(static_cast<size_t>(n) * n, 0);
    do {
        g.a.data = digits;
        if (fq_rank(f, g.a) != n) continue;
        g.b.assign(static_cast<size_t>(n), 0);
        do {
            out.add(aff_fix_size(f, g));
        } while (next_digits(g.b, q));
    } while (next_digits(digits, q));
    return out;
}

// ---- Unitary group ----

namespace {

// Fills `out` with a Haar unitary and returns tr(out); `work` and `qr` are
// scratch reused across draws.
std::complex<double> haar_unitary(int n, StreamRng& rng, Eigen::MatrixXcd& work,
                                  Eigen::HouseholderQR<Eigen::MatrixXcd>& qr,
                                  Eigen::MatrixXcd& out) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) work(i, j) = rng.complex_normal();
    qr.compute(work);
    out = qr.householderQ();
    std::complex<double> tr = 0.0;
    for (int j = 0; j < n; ++j) {
        std::complex<double> d = qr.matrixQR()(j, j);
        double mag = std::abs(d);
        std::complex<double> phase = (mag == 0.0) ? std::complex<double>(1.0, 0.0) : d / mag;
        out.col(j) *= phase;
        tr += out(j, j);
    }
    return tr;
}

}  // namespace

Eigen::MatrixXcd sample_unitary(int n, StreamRng& rng) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    Eigen::MatrixXcd work(n, n), out(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(n, n);
    haar_unitary(n, rng, work, qr, out);
    return out;
}

measures::MomentTable unitary_trace_experiment(int n, int max_order, uint64_t trials,
                                               uint64_t seed, int threads) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    if (max_order < 0) throw std::invalid_argument("negative moment order");
    require_trials(trials);
    size_t stride = static_cast<size_t>(max_order) + 1;
    auto parts = run_trial_blocks<std::vector<std::complex<double>>>(
        trials, seed, threads, [&](uint64_t begin, uint64_t end, StreamRng& rng) {
            std::vector<std::complex<double>> sums(stride * stride, 0.0);
            std::vector<std::complex<double>> za(stride), zb(stride);
            Eigen::MatrixXcd work(n, n), out(n, n);
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(n, n);
            for (uint64_t t = begin; t < end; ++t) {
                std::complex<double> z = haar_unitary(n, rng, work, qr, out);
                za[0] = zb[0] = 1.0;
                for (int k = 1; k <= max_order; ++k) {
                    za[static_cast<size_t>(k)] = za[static_cast<size_t>(k) - 1] * z;
                    zb[static_cast<size_t>(k)] = zb[static_cast<size_t>(k) - 1] * std::conj(z);
                }
                for (int a = 0; a <= max_order; ++a)
                    for (int b = 0; a + b <= max_order; ++b)
                        sums[static_cast<size_t>(a) * stride + static_cast<size_t>(b)] +=
                            za[static_cast<size_t>(a)] * zb[static_cast<size_t>(b)];
            }
            return sums;
        });

    std::vector<std::complex<double>> total(stride * stride, 0.0);
    for (const auto& p : parts)
        for (size_t i = 0; i < p.size(); ++i) total[i] += p[i];

    auto table = measures::MomentTable::empirical_complex(max_order, trials);
    double inv = 1.0 / static_cast<double>(trials);
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; a + b <= max_order; ++b)
            table.set_value(a, b,
                            total[static_cast<size_t>(a) * stride + static_cast<size_t>(b)] * inv);
    return table;
}

// ---- Character moments ----

Rat character_moment_exact(const IntegerPartition& lambda, int n, int a) {
    if (a < 0) throw std::invalid_argument("negative moment order");
    IntegerPartition full = lambda.padded(n);
    Int num = 0;
    for (const auto& mu : combinatorics::enumerate_cycle_types(n)) {
        Int chi = combinatorics::character_value(full, mu);
        num += mu.class_size() * int_pow(chi, static_cast<unsigned long>(a));
    }
    return Rat(num) / Rat(factorial(static_cast<unsigned long>(n)));
}

StabilizationReport character_moment_stabilization(const IntegerPartition& lambda, int a,
                                                   int extra) {
    if (a < 1) throw std::invalid_argument("moment order must be positive");
    if (extra < 1) throw std::invalid_argument("extra must be positive");
    StabilizationReport rep;
    rep.lambda = lambda;
    rep.a = a;
    int first = lambda.parts().empty() ? 0 : lambda.parts().front();
    rep.n_start = std::max(1, lambda.weight() + first);
    rep.bound = 4 * a * lambda.weight() - 1;
    int n_end = std::max(rep.bound, rep.n_start) + extra;
    for (int n = rep.n_start; n <= n_end; ++n)
        rep.values.emplace_back(n, character_moment_exact(lambda, n, a));
    rep.limit = rep.values.back().second;
    rep.observed = n_end;
    for (auto it = rep.values.rbegin(); it != rep.values.rend() && it->second == rep.limit; ++it)
        rep.observed = it->first;
    rep.within_bound = rep.observed <= rep.bound;
    return rep;
}

EmpiricalDistribution character_mc_experiment(const IntegerPartition& lambda, int n,
                                              uint64_t trials, uint64_t seed, int threads) {
    require_trials(trials);
    IntegerPartition full = lambda.padded(n);
    auto parts = run_trial_blocks<EmpiricalDistribution>(
        trials, seed, threads, [&](uint64_t begin, uint64_t end, StreamRng& rng) {
            EmpiricalDistribution part;
            std::vector<int> perm(static_cast<size_t>(n));
            std::map<std::vector<int>, int64_t> cache;
            for (uint64_t t = begin; t < end; ++t) {
                fill_uniform_perm(perm, rng);
                std::vector<int> lengths;
                std::vector<char> seen(perm.size(), 0);
                for (size_t start = 0; start < perm.size(); ++start) {
                    if (seen[start]) continue;
                    int len = 0;
                    size_t at = start;
                    while (!seen[at]) {
                        seen[at] = 1;
                        at = static_cast<size_t>(perm[at]);
                        ++len;
                    }
                    lengths.push_back(len);
                }
                std::sort(lengths.rbegin(), lengths.rend());
                auto it = cache.find(lengths);
                if (it == cache.end()) {
                    Int chi = combinatorics::character_value(
                        full, CycleType::from_cycle_lengths(lengths));
                    if (!chi.fits_slong_p())
                        throw std::overflow_error("character value out of int64 range");
                    it = cache.emplace(lengths, chi.get_si()).first;
                }
                part.add(it->second);
            }
            return part;
        });
    EmpiricalDistribution out;
    for (const auto& p : parts) out.merge(p);
    out.generator = "character-mc lambda=" + partition_label(lambda) + " n=" + std::to_string(n);
    out.seed = seed;
    return out;
}

}  // namespace tel::randomlab
