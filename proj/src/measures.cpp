#include "tel/measures.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tel/combinatorics.hpp"

namespace tel::measures {

namespace {

bool is_prime_power(unsigned long q) {
    if (q < 2) return false;
    for (unsigned long p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            while (q % p == 0) q /= p;
            return q == 1;
        }
    }
    return true;
}

std::string order_name(int a, int b, MomentKind kind) {
    if (kind == MomentKind::Real) return std::to_string(a);
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

MomentTable::MomentTable(MomentKind kind, int max_order, bool exact,
                         std::optional<uint64_t> trials)
    : kind_(kind), max_order_(max_order), exact_(exact), trials_(trials) {
    if (max_order < 0) throw std::invalid_argument("negative max order");
}

MomentTable MomentTable::exact_real(int max_order) {
    return MomentTable(MomentKind::Real, max_order, true, std::nullopt);
}

MomentTable MomentTable::exact_complex(int max_order) {
    return MomentTable(MomentKind::ComplexMixed, max_order, true, std::nullopt);
}

MomentTable MomentTable::empirical_real(int max_order, uint64_t trials) {
    return MomentTable(MomentKind::Real, max_order, false, trials);
}

MomentTable MomentTable::empirical_complex(int max_order, uint64_t trials) {
    return MomentTable(MomentKind::ComplexMixed, max_order, false, trials);
}

void MomentTable::check_index(int a, int b) const {
    if (a < 0 || b < 0) throw std::invalid_argument("negative moment order");
    if (kind_ == MomentKind::Real && b != 0)
        throw std::invalid_argument("real table indexed by a single order");
    if (a + b > max_order_)
        throw std::invalid_argument("moment order " + order_name(a, b, kind_) +
                                    " beyond table max_order " + std::to_string(max_order_));
}

bool MomentTable::has(int a, int b) const {
    if (a < 0 || b < 0 || a + b > max_order_) return false;
    if (kind_ == MomentKind::Real && b != 0) return false;
    auto key = std::make_pair(a, b);
    return exact_ ? exact_entries_.count(key) > 0 : float_entries_.count(key) > 0;
}

const Rat& MomentTable::exact_entry(int a, int b) const {
    check_index(a, b);
    if (!exact_) throw std::logic_error("exact_entry on an empirical table");
    auto it = exact_entries_.find({a, b});
    if (it == exact_entries_.end())
        throw std::invalid_argument("missing moment " + order_name(a, b, kind_));
    return it->second;
}

std::complex<double> MomentTable::value(int a, int b) const {
    check_index(a, b);
    if (exact_) return {rat_to_double(exact_entry(a, b)), 0.0};
    auto it = float_entries_.find({a, b});
    if (it == float_entries_.end())
        throw std::invalid_argument("missing moment " + order_name(a, b, kind_));
    return it->second;
}

void MomentTable::set_exact(int a, int b, const Rat& v) {
    check_index(a, b);
    if (!exact_) throw std::logic_error("set_exact on an empirical table");
    exact_entries_[{a, b}] = v;
}

void MomentTable::set_value(int a, int b, std::complex<double> v) {
    check_index(a, b);
    if (exact_) throw std::logic_error("set_value on an exact table");
    float_entries_[{a, b}] = v;
}

void MomentTable::set_support(std::vector<int64_t> values) { support_ = std::move(values); }

void MomentTable::validate() const {
    if (!has(0, 0)) throw std::invalid_argument("moment table lacks order-0 entry");
    if (exact_) {
        if (exact_entry(0, 0) != 1) throw std::invalid_argument("order-0 moment must be 1");
        if (kind_ == MomentKind::ComplexMixed)
            for (const auto& [key, v] : exact_entries_) {
                auto sym = exact_entries_.find({key.second, key.first});
                if (sym == exact_entries_.end() || sym->second != v)
                    throw std::invalid_argument("conjugate symmetry violated at " +
                                                order_name(key.first, key.second, kind_));
            }
    } else {
        std::complex<double> one = value(0, 0);
        if (std::abs(one - std::complex<double>(1.0, 0.0)) > 1e-12)
            throw std::invalid_argument("order-0 moment must be 1");
        if (kind_ == MomentKind::ComplexMixed)
            for (const auto& [key, v] : float_entries_) {
                auto sym = float_entries_.find({key.second, key.first});
                if (sym == float_entries_.end() ||
                    std::abs(std::conj(sym->second) - v) > 1e-9 * (1.0 + std::abs(v)))
                    throw std::invalid_argument("conjugate symmetry violated at " +
                                                order_name(key.first, key.second, kind_));
            }
    }
}

std::string MomentTable::to_json_string() const {
    nlohmann::json j;
    j["kind"] = kind_ == MomentKind::Real ? "real" : "complex-mixed";
    j["max_order"] = max_order_;
    j["exact"] = exact_;
    if (trials_) j["trials"] = *trials_;
    nlohmann::json entries = nlohmann::json::array();
    if (exact_) {
        for (const auto& [key, v] : exact_entries_)
            entries.push_back({{"a", key.first}, {"b", key.second}, {"value", rat_to_string(v)}});
    } else {
        for (const auto& [key, v] : float_entries_)
            entries.push_back(
                {{"a", key.first}, {"b", key.second}, {"re", v.real()}, {"im", v.imag()}});
    }
    j["entries"] = std::move(entries);
    if (support_) j["support"] = *support_;
    return j.dump();
}

MomentTable MomentTable::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind != "real" && kind != "complex-mixed")
        throw std::invalid_argument("unknown moment table kind: " + kind);
    MomentTable t(kind == "real" ? MomentKind::Real : MomentKind::ComplexMixed,
                  j.at("max_order").get<int>(), j.at("exact").get<bool>(),
                  j.contains("trials") ? std::optional<uint64_t>(j["trials"].get<uint64_t>())
                                       : std::nullopt);
    for (const auto& e : j.at("entries")) {
        int a = e.at("a").get<int>();
        int b = e.at("b").get<int>();
        if (t.exact_)
            t.set_exact(a, b, rat_from_string(e.at("value").get<std::string>()));
        else
            t.set_value(a, b, {e.at("re").get<double>(), e.at("im").get<double>()});
    }
    if (j.contains("support")) t.set_support(j["support"].get<std::vector<int64_t>>());
    t.validate();
    return t;
}

std::string MomentTable::to_csv() const {
    std::ostringstream os;
    if (exact_) {
        os << "a,b,value\n";
        for (const auto& [key, v] : exact_entries_)
            os << key.first << "," << key.second << "," << rat_to_string(v) << "\n";
    } else {
        os << "a,b,re,im\n";
        os.precision(17);
        for (const auto& [key, v] : float_entries_)
            os << key.first << "," << key.second << "," << v.real() << "," << v.imag() << "\n";
    }
    return os.str();
}

MomentTable poisson_moments(const Rat& lambda, int max_order) {
    if (lambda <= 0) throw std::invalid_argument("poisson_moments: lambda must be positive");
    MomentTable t = MomentTable::exact_real(max_order);
    std::vector<Rat> m(static_cast<size_t>(max_order) + 1);
    m[0] = 1;
    for (int k = 0; k < max_order; ++k) {
        Rat next = 0;
        for (int r = 0; r <= k; ++r)
            next += Rat(binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(r))) *
                    m[static_cast<size_t>(r)];
        m[static_cast<size_t>(k) + 1] = lambda * next;
    }
    for (int k = 0; k <= max_order; ++k) t.set_exact(k, m[static_cast<size_t>(k)]);
    return t;
}

MomentTable complex_gaussian_moments(int max_order) {
    MomentTable t = MomentTable::exact_complex(max_order);
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; a + b <= max_order; ++b)
            t.set_exact(a, b, a == b ? Rat(factorial(static_cast<unsigned long>(a))) : Rat(0));
    return t;
}

MomentTable q_fix_moments(unsigned long q, int max_order) {
    if (!is_prime_power(q)) throw std::invalid_argument("q must be a prime power");
    MomentTable t = MomentTable::exact_real(max_order);
    for (int k = 0; k <= max_order; ++k)
        t.set_exact(k, Rat(combinatorics::count_subspaces(static_cast<unsigned>(k), q)));
    return t;
}

MomentTable q_affine_fix_moments(unsigned long q, int max_order) {
    if (!is_prime_power(q)) throw std::invalid_argument("q must be a prime power");
    MomentTable t = MomentTable::exact_real(max_order);
    t.set_exact(0, Rat(1));
    for (int k = 1; k <= max_order; ++k)
        t.set_exact(k, Rat(combinatorics::count_affine_subspaces(static_cast<unsigned>(k) - 1, q)));
    return t;
}

MomentTable pushforward_power(const MomentTable& source, int m, int n) {
    if (source.kind() != MomentKind::ComplexMixed)
        throw std::invalid_argument("pushforward_power needs a complex-mixed table");
    if (m < 0 || n < 0 || m + n == 0) throw std::invalid_argument("bad power exponents");
    int out_order = source.max_order() / (m + n);
    MomentTable t = source.is_exact()
                        ? MomentTable::exact_complex(out_order)
                        : MomentTable::empirical_complex(out_order, source.trials().value_or(0));
    for (int a = 0; a <= out_order; ++a)
        for (int b = 0; a + b <= out_order; ++b) {
            int sa = a * m + b * n, sb = a * n + b * m;
            if (!source.has(sa, sb))
                throw std::invalid_argument("pushforward_power: source order (" +
                                            std::to_string(sa) + "," + std::to_string(sb) +
                                            ") unavailable");
            if (source.is_exact())
                t.set_exact(a, b, source.exact_entry(sa, sb));
            else
                t.set_value(a, b, source.value(sa, sb));
        }
    return t;
}

MomentTable pushforward_2re(const MomentTable& source) {
    if (source.kind() != MomentKind::ComplexMixed)
        throw std::invalid_argument("pushforward_2re needs a complex-mixed table");
    int out_order = source.max_order();
    MomentTable t = source.is_exact()
                        ? MomentTable::exact_real(out_order)
                        : MomentTable::empirical_real(out_order, source.trials().value_or(0));
    for (int a = 0; a <= out_order; ++a) {
        if (source.is_exact()) {
            Rat sum = 0;
            for (int b = 0; b <= a; ++b) {
                if (!source.has(b, a - b))
                    throw std::invalid_argument("pushforward_2re: source order unavailable");
                sum += Rat(binomial(static_cast<unsigned long>(a), static_cast<unsigned long>(b))) *
                       source.exact_entry(b, a - b);
            }
            t.set_exact(a, sum);
        } else {
            std::complex<double> sum = 0.0;
            for (int b = 0; b <= a; ++b) {
                if (!source.has(b, a - b))
                    throw std::invalid_argument("pushforward_2re: source order unavailable");
                sum += rat_to_double(Rat(binomial(static_cast<unsigned long>(a),
                                                  static_cast<unsigned long>(b)))) *
                       source.value(b, a - b);
            }
            t.set_value(a, sum.real());
        }
    }
    return t;
}

HankelReport hankel_psd(const MomentTable& table, int A) {
    if (table.kind() != MomentKind::Real || !table.is_exact())
        throw std::invalid_argument("hankel_psd needs an exact real table");
    if (A < 0) throw std::invalid_argument("negative Hankel order");
    size_t d = static_cast<size_t>(A) + 1;
    std::vector<std::vector<Rat>> h(d, std::vector<Rat>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            h[i][j] = table.exact_entry(static_cast<int>(i + j));

    std::vector<std::vector<Rat>> m = h;
    // Congruence transform rows: basis[k] expresses active row k in the
    // original coordinates, so quadratic-form values can be reported back
    // as explicit witness vectors.
    std::vector<std::vector<Rat>> basis(d, std::vector<Rat>(d));
    for (size_t i = 0; i < d; ++i) basis[i][i] = 1;

    auto quad_value = [&](const std::vector<Rat>& v) {
        Rat q = 0;
        for (size_t i = 0; i < d; ++i) {
            if (v[i] == 0) continue;
            for (size_t j = 0; j < d; ++j) q += v[i] * h[i][j] * v[j];
        }
        return q;
    };

    for (size_t k = 0; k < d; ++k) {
        if (m[k][k] < 0) {
            HankelReport r;
            r.psd = false;
            r.witness = basis[k];
            r.witness_value = quad_value(r.witness);
            return r;
        }
        if (m[k][k] == 0) {
            // A zero diagonal with a nonzero off-diagonal entry c gives the
            // indefinite 2x2 block [[0,c],[c,dd]]; alpha*u + w with
            // alpha = -(dd+1)/(2c) evaluates to -1.
            for (size_t j = k + 1; j < d; ++j) {
                if (m[k][j] == 0) continue;
                Rat c = m[k][j];
                Rat dd = m[j][j];
                Rat alpha = -(dd + 1) / (2 * c);
                HankelReport r;
                r.psd = false;
                r.witness.assign(d, Rat(0));
                for (size_t t = 0; t < d; ++t)
                    r.witness[t] = alpha * basis[k][t] + basis[j][t];
                r.witness_value = quad_value(r.witness);
                return r;
            }
            continue;  // zero row in the active block, nothing to eliminate
        }
        for (size_t i = k + 1; i < d; ++i) {
            if (m[i][k] == 0) continue;
            Rat f = m[i][k] / m[k][k];
            for (size_t j = k; j < d; ++j) m[i][j] -= f * m[k][j];
            for (size_t j = 0; j < d; ++j) m[j][i] = m[i][j];  // keep symmetric view
            for (size_t t = 0; t < d; ++t) basis[i][t] -= f * basis[k][t];
        }
    }
    HankelReport r;
    r.psd = true;
    return r;
}

double carleman_partial(const MomentTable& table, int A) {
    if (A < 0) throw std::invalid_argument("negative order");
    double sum = 0.0;
    for (int a = 1; a <= A; ++a) {
        double v = table.kind() == MomentKind::Real ? table.value(2 * a).real()
                                                    : table.value(a, a).real();
        if (v <= 0) continue;  // no real root; cannot contribute a term
        sum += std::pow(v, -1.0 / (2.0 * a));
    }
    return sum;
}

bool MomentComparisonReport::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return support.pass;
}

MomentComparisonReport compare_moments(const MomentTable& empirical, const MomentTable& target,
                                       const std::vector<std::pair<int, int>>& orders,
                                       double z, std::optional<uint64_t> support_base) {
    MomentComparisonReport report;
    report.z = z;
    for (auto [a, b] : orders) {
        if (!empirical.has(a, b))
            throw std::invalid_argument("empirical table missing order " +
                                        order_name(a, b, empirical.kind()));
        if (!target.has(a, b))
            throw std::invalid_argument("target table missing order " +
                                        order_name(a, b, target.kind()));
        MomentComparisonRow row;
        row.a = a;
        row.b = b;
        row.empirical = empirical.value(a, b);
        row.target = target.value(a, b);
        if (empirical.is_exact() && target.is_exact()) {
            row.exact_mode = true;
            Rat diff = empirical.exact_entry(a, b) - target.exact_entry(a, b);
            row.deviation = std::abs(rat_to_double(diff));
            row.stderr_est = 0.0;
            row.pass = diff == 0;
        } else {
            row.deviation = std::abs(row.empirical - row.target);
            double se = 0.0;
            if (!empirical.is_exact() && empirical.trials() && *empirical.trials() > 0) {
                int sa = empirical.kind() == MomentKind::Real ? 2 * a : a + b;
                int sb = empirical.kind() == MomentKind::Real ? 0 : a + b;
                if (!empirical.has(sa, sb))
                    throw std::invalid_argument(
                        "empirical table missing order " + order_name(sa, sb, empirical.kind()) +
                        " needed for the standard error of " + order_name(a, b, empirical.kind()));
                double second = empirical.value(sa, sb).real();
                double var = second - std::norm(row.empirical);
                if (var < 0) var = 0;  // sampling noise can nudge it negative
                se = std::sqrt(var / static_cast<double>(*empirical.trials()));
            }
            row.stderr_est = se;
            row.pass = row.deviation <= z * se;
        }
        report.rows.push_back(row);
    }
    if (support_base) {
        report.support.checked = true;
        if (!empirical.support())
            throw std::invalid_argument("support check requested but the empirical table carries "
                                        "no observed-value list");
        uint64_t q = *support_base;
        if (q < 2) throw std::invalid_argument("support base must be at least 2");
        for (int64_t v : *empirical.support()) {
            bool ok = v == 0;
            if (!ok && v > 0) {
                uint64_t u = static_cast<uint64_t>(v);
                while (u % q == 0) u /= q;
                ok = u == 1;
            }
            if (!ok) report.support.violations.push_back(v);
        }
        report.support.pass = report.support.violations.empty();
    }
    return report;
}

namespace {

nlohmann::json row_json(const MomentComparisonRow& row) {
    nlohmann::json j;
    j["a"] = row.a;
    j["b"] = row.b;
    if (row.b == 0 && std::abs(row.empirical.imag()) == 0 && std::abs(row.target.imag()) == 0) {
        j["empirical"] = row.empirical.real();
        j["target"] = row.target.real();
    } else {
        j["empirical"] = {{"re", row.empirical.real()}, {"im", row.empirical.imag()}};
        j["target"] = {{"re", row.target.real()}, {"im", row.target.imag()}};
    }
    j["deviation"] = row.deviation;
    j["stderr"] = row.stderr_est;
    j["exact"] = row.exact_mode;
    j["pass"] = row.pass;
    return j;
}

std::string complex_cell(std::complex<double> v) {
    std::ostringstream os;
    os.precision(17);
    if (v.imag() == 0) {
        os << v.real();
    } else {
        os << v.real() << (v.imag() >= 0 ? "+" : "") << v.imag() << "i";
    }
    return os.str();
}

}  // namespace

std::string report_to_json_string(const MomentComparisonReport& r) {
    nlohmann::json j;
    j["z"] = r.z;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) rows.push_back(row_json(row));
    j["rows"] = std::move(rows);
    if (r.support.checked) {
        j["support"] = {{"pass", r.support.pass}, {"violations", r.support.violations}};
    }
    j["all_pass"] = r.all_pass();
    return j.dump();
}

std::string report_to_csv(const MomentComparisonReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "order,empirical,target,deviation,stderr,pass\n";
    for (const auto& row : r.rows) {
        std::string order = row.b == 0 ? std::to_string(row.a)
                                       : std::to_string(row.a) + ":" + std::to_string(row.b);
        os << order << "," << complex_cell(row.empirical) << "," << complex_cell(row.target)
           << "," << row.deviation << "," << row.stderr_est << "," << (row.pass ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace tel::measures
