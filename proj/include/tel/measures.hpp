#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tel/bigint.hpp"

namespace tel::measures {

enum class MomentKind { Real, ComplexMixed };

// Moments of a (spectral) measure, either exact rationals or float
// estimates with a trial count. Real tables index by a single order a;
// complex-mixed tables by (a,b) with a+b <= max_order, meaning the mixed
// moment of z^a conj(z)^b. The exact complex-mixed tables built here are
// all real-valued, so exact entries are stored as rationals in both kinds.
class MomentTable {
public:
    static MomentTable exact_real(int max_order);
    static MomentTable exact_complex(int max_order);
    static MomentTable empirical_real(int max_order, uint64_t trials);
    static MomentTable empirical_complex(int max_order, uint64_t trials);

    MomentKind kind() const { return kind_; }
    int max_order() const { return max_order_; }
    bool is_exact() const { return exact_; }
    std::optional<uint64_t> trials() const { return trials_; }

    bool has(int a, int b = 0) const;
    const Rat& exact_entry(int a, int b = 0) const;
    std::complex<double> value(int a, int b = 0) const;

    void set_exact(int a, int b, const Rat& v);
    void set_exact(int a, const Rat& v) { set_exact(a, 0, v); }
    void set_value(int a, int b, std::complex<double> v);
    void set_value(int a, double v) { set_value(a, 0, std::complex<double>(v, 0.0)); }

    // Distinct values observed by the generating experiment, for support
    // checks (fixed-point counts must be 0 or powers of q).
    void set_support(std::vector<int64_t> values);
    const std::optional<std::vector<int64_t>>& support() const { return support_; }

    // Checks normalization entry(0)=1 and, for complex-mixed tables,
    // conjugate symmetry; throws on violation.
    void validate() const;

    std::string to_json_string() const;
    static MomentTable from_json_string(const std::string& text);
    // CSV rows "a,b,value" (exact, rational strings) or "a,b,re,im".
    std::string to_csv() const;

    friend bool operator==(const MomentTable&, const MomentTable&) = default;

private:
    MomentTable(MomentKind kind, int max_order, bool exact, std::optional<uint64_t> trials);
    void check_index(int a, int b) const;

    MomentKind kind_ = MomentKind::Real;
    int max_order_ = 0;
    bool exact_ = true;
    std::optional<uint64_t> trials_;
    std::map<std::pair<int, int>, Rat> exact_entries_;
    std::map<std::pair<int, int>, std::complex<double>> float_entries_;
    std::optional<std::vector<int64_t>> support_;
};

// Moments of Poisson(lambda) by the Touchard recurrence
// m_{k+1} = lambda * sum_{r<=k} C(k,r) m_r.
MomentTable poisson_moments(const Rat& lambda, int max_order);

// Mixed moments of the standard complex gaussian: entry(a,b) = a! if a = b
// else 0.
MomentTable complex_gaussian_moments(int max_order);

// Limit laws of |Fix| on GL_n(F_q) and Aff_n(F_q): k-th moment the number
// of subspaces of F_q^k, resp. of nonempty affine subspaces of F_q^(k-1).
MomentTable q_fix_moments(unsigned long q, int max_order);
MomentTable q_affine_fix_moments(unsigned long q, int max_order);

// Moments of the image measure under z -> z^m conj(z)^n:
// entry(a,b) = source(a*m + b*n, a*n + b*m).
MomentTable pushforward_power(const MomentTable& source, int m, int n);

// Moments of the image under z -> z + conj(z):
// entry(a) = sum_b C(a,b) source(b, a-b).
MomentTable pushforward_2re(const MomentTable& source);

struct HankelReport {
    bool psd = false;
    // When not PSD: rational vector v with v^T H v = witness_value < 0.
    std::vector<Rat> witness;
    Rat witness_value;
};

// Exact positive-semidefiniteness of the (A+1)x(A+1) Hankel matrix
// H[i][j] = m_{i+j} of an exact real table (needs orders up to 2A).
HankelReport hankel_psd(const MomentTable& table, int A);

// Partial Carleman sum: real tables sum entry(2a)^(-1/2a), complex-mixed
// tables sum entry(a,a)^(-1/2a), a = 1..A. Diagnostic only.
double carleman_partial(const MomentTable& table, int A);

struct MomentComparisonRow {
    int a = 0;
    int b = 0;
    std::complex<double> empirical;
    std::complex<double> target;
    double deviation = 0.0;
    double stderr_est = 0.0;
    bool exact_mode = false;  // both tables exact: pass means equality
    bool pass = false;
};

struct SupportCheck {
    bool checked = false;
    bool pass = true;
    std::vector<int64_t> violations;
};

struct MomentComparisonReport {
    std::vector<MomentComparisonRow> rows;
    double z = 4.0;
    SupportCheck support;
    bool all_pass() const;
};

// Per-order deviation of empirical vs target moments with the Monte Carlo
// standard error sqrt((m̂(a+b,a+b) - |m̂(a,b)|^2) / N) and a band of z
// standard errors. With support_base = q, also checks every observed value
// is 0 or a power of q. Missing orders are an error, never skipped.
MomentComparisonReport compare_moments(const MomentTable& empirical, const MomentTable& target,
                                       const std::vector<std::pair<int, int>>& orders,
                                       double z = 4.0,
                                       std::optional<uint64_t> support_base = std::nullopt);

std::string report_to_json_string(const MomentComparisonReport& r);
std::string report_to_csv(const MomentComparisonReport& r);

}  // namespace tel::measures
