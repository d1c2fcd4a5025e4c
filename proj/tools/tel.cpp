#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tel/arith.hpp"
#include "tel/category.hpp"
#include "tel/combinatorics.hpp"
#include "tel/errors.hpp"
#include "tel/measures.hpp"
#include "tel/randomlab.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
    return buf;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

struct Output {
    bool json = false;
    std::string out_path;

    std::string subcommand;
    std::map<std::string, std::string> params;
    double wall_seconds = 0.0;

    nlohmann::json manifest() const {
        nlohmann::json m;
        m["subcommand"] = subcommand;
        m["params"] = params;
        m["version"] = kVersion;
        m["timestamp"] = iso_timestamp();
        m["wall_seconds"] = wall_seconds;
        return m;
    }

    void write_text(const std::string& path, const std::string& text) const {
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot open output file " + path);
        f << text;
    }

    // CSV goes to stdout or --out (manifest in a sibling file); JSON embeds
    // the manifest alongside the payload.
    void emit(const std::string& csv, const nlohmann::json& data) const {
        if (json) {
            nlohmann::json doc;
            doc["manifest"] = manifest();
            doc["data"] = data;
            std::string text = doc.dump(2) + "\n";
            if (out_path.empty())
                std::cout << text;
            else
                write_text(out_path, text);
        } else {
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                write_text(out_path, csv);
                write_text(out_path + ".manifest.json", manifest().dump(2) + "\n");
            }
        }
    }
};

void add_output_flags(CLI::App* cmd, Output& out) {
    cmd->add_flag("--json", out.json, "emit JSON with an embedded run manifest");
    cmd->add_option("--out", out.out_path, "write output to this file instead of stdout");
}

class Timer {
public:
    explicit Timer(Output& out) : out_(out), start_(std::chrono::steady_clock::now()) {}
    void stop() {
        out_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    Output& out_;
    std::chrono::steady_clock::time_point start_;
};

void emit_distribution(Output& out, const tel::randomlab::EmpiricalDistribution& dist) {
    out.emit(dist.to_csv(), nlohmann::json::parse(dist.to_json_string()));
}

void emit_moment_table(Output& out, const tel::measures::MomentTable& table) {
    out.emit(table.to_csv(), nlohmann::json::parse(table.to_json_string()));
}

tel::combinatorics::IntegerPartition parse_lambda(const std::string& text) {
    std::vector<int> parts;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty part in --lambda " + text);
        parts.push_back(std::stoi(tok));
    }
    std::sort(parts.rbegin(), parts.rend());
    return tel::combinatorics::IntegerPartition(parts);
}

tel::Rat parse_rat(const std::string& text) {
    tel::Rat r;
    if (mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0 || r.get_den() == 0)
        throw std::invalid_argument("not a rational: " + text + " (use p or p/q)");
    r.canonicalize();
    return r;
}

// ---- Subcommand bodies ----

void run_bell(Output& out, int k) {
    Timer timer(out);
    std::ostringstream csv;
    csv << "k,bell\n";
    auto rows = nlohmann::json::array();
    for (int i = 0; i <= k; ++i) {
        auto b = tel::combinatorics::bell(static_cast<unsigned>(i));
        csv << i << ',' << b.get_str() << '\n';
        rows.push_back({{"k", i}, {"bell", b.get_str()}});
    }
    timer.stop();
    out.emit(csv.str(), rows);
}

void run_homdim(Output& out, int k, int n) {
    Timer timer(out);
    auto dim = tel::category::hom_dim_repsn_unit_std(static_cast<unsigned>(k),
                                                     static_cast<unsigned>(n));
    auto generic = tel::combinatorics::bell(static_cast<unsigned>(k));
    timer.stop();
    std::ostringstream csv;
    csv << "k,n,dim,generic_dim\n"
        << k << ',' << n << ',' << dim.get_str() << ',' << generic.get_str() << '\n';
    out.emit(csv.str(), {{"k", k},
                         {"n", n},
                         {"dim", dim.get_str()},
                         {"generic_dim", generic.get_str()}});
}

void run_gram_rank(Output& out, int k, long n) {
    Timer timer(out);
    auto rank = tel::category::gram_rank_at(static_cast<unsigned>(k), n);
    timer.stop();
    std::ostringstream csv;
    csv << "k,n,rank\n" << k << ',' << n << ',' << rank.get_str() << '\n';
    out.emit(csv.str(), {{"k", k}, {"n", n}, {"rank", rank.get_str()}});
}

void run_rencontres(Output& out, int n) {
    Timer timer(out);
    auto probs = tel::randomlab::exact_fix_distribution(n);
    timer.stop();
    std::ostringstream csv;
    csv << "r,count,probability,probability_float\n";
    auto rows = nlohmann::json::array();
    for (int r = 0; r <= n; ++r) {
        auto count = tel::combinatorics::rencontres(static_cast<unsigned>(n),
                                                    static_cast<unsigned>(r));
        const auto& p = probs[static_cast<size_t>(r)];
        csv << r << ',' << count.get_str() << ',' << tel::rat_to_string(p) << ','
            << fmt_double(tel::rat_to_double(p)) << '\n';
        rows.push_back({{"r", r},
                        {"count", count.get_str()},
                        {"probability", tel::rat_to_string(p)},
                        {"probability_float", tel::rat_to_double(p)}});
    }
    out.emit(csv.str(), rows);
}

void run_cycles(Output& out, int n, int imax, uint64_t trials, uint64_t seed, int threads) {
    Timer timer(out);
    auto exp = tel::randomlab::cycle_poisson_experiment(n, imax, trials, seed, threads);
    timer.stop();

    std::ostringstream csv;
    csv << "kind,key,value,count\n";
    for (int i = 1; i <= imax; ++i)
        for (const auto& [value, count] : exp.per_cycle[static_cast<size_t>(i - 1)].histogram)
            csv << "hist," << i << ',' << value << ',' << count << '\n';
    for (const auto& [exps, estimate] : exp.joint_moments) {
        csv << "joint,";
        for (size_t i = 0; i < exps.size(); ++i) csv << (i ? ":" : "") << exps[i];
        csv << ',' << fmt_double(tel::rat_to_double(estimate)) << ",\n";
    }

    nlohmann::json data;
    data["n"] = n;
    data["imax"] = imax;
    data["trials"] = trials;
    data["seed"] = seed;
    auto hists = nlohmann::json::array();
    for (const auto& d : exp.per_cycle) hists.push_back(nlohmann::json::parse(d.to_json_string()));
    data["per_cycle"] = hists;
    auto joints = nlohmann::json::array();
    for (const auto& [exps, estimate] : exp.joint_moments)
        joints.push_back({{"exponents", exps},
                          {"estimate", tel::rat_to_string(estimate)},
                          {"value", tel::rat_to_double(estimate)}});
    data["joint_moments"] = joints;
    out.emit(csv.str(), data);
}

void run_char_moments(Output& out, const std::string& lambda_text, int n, int a,
                      uint64_t mc_trials, uint64_t seed, int threads) {
    auto lambda = parse_lambda(lambda_text);
    Timer timer(out);
    if (mc_trials == 0) {
        std::vector<tel::Rat> moments;
        for (int order = 1; order <= a; ++order)
            moments.push_back(tel::randomlab::character_moment_exact(lambda, n, order));
        timer.stop();
        std::ostringstream csv;
        csv << "a,moment\n";
        auto rows = nlohmann::json::array();
        for (int order = 1; order <= a; ++order) {
            const auto& m = moments[static_cast<size_t>(order - 1)];
            csv << order << ',' << tel::rat_to_string(m) << '\n';
            rows.push_back({{"a", order}, {"moment", tel::rat_to_string(m)}});
        }
        out.emit(csv.str(), rows);
        return;
    }
    auto dist = tel::randomlab::character_mc_experiment(lambda, n, mc_trials, seed, threads);
    timer.stop();
    emit_distribution(out, dist);
}

void run_group_fix(Output& out, bool affine, int n, int q, bool exact, uint64_t trials,
                   uint64_t seed, int threads) {
    Timer timer(out);
    tel::randomlab::EmpiricalDistribution dist;
    if (exact)
        dist = affine ? tel::randomlab::aff_fix_exact(n, q) : tel::randomlab::gl_fix_exact(n, q);
    else if (affine)
        dist = tel::randomlab::aff_fix_experiment(n, q, trials, seed, threads);
    else
        dist = tel::randomlab::gl_fix_experiment(n, q, trials, seed, threads);
    timer.stop();
    emit_distribution(out, dist);
}

void run_unitary_trace(Output& out, int n, int max_order, uint64_t trials, uint64_t seed,
                       int threads) {
    Timer timer(out);
    auto table = tel::randomlab::unitary_trace_experiment(n, max_order, trials, seed, threads);
    timer.stop();
    emit_moment_table(out, table);
}

// Accepts a bare payload or a {"manifest":..,"data":..} document, holding
// either a moment table or a sampled value histogram.
nlohmann::json load_payload(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read table file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    auto j = nlohmann::json::parse(buf.str());
    if (j.is_object() && j.contains("data")) return j["data"];
    return j;
}

tel::measures::MomentTable load_table(const std::string& path, int histogram_order) {
    auto j = load_payload(path);
    if (j.is_object() && j.contains("histogram")) {
        tel::randomlab::EmpiricalDistribution dist;
        dist.generator = j.value("generator", std::string());
        dist.seed = j.value("seed", uint64_t{0});
        for (const auto& row : j["histogram"])
            dist.add(row["value"].get<int64_t>(), row["count"].get<uint64_t>());
        return dist.to_moment_table(histogram_order);
    }
    if (j.is_array() && !j.empty() && j.front().is_object() && j.front().contains("moment")) {
        int top = 0;
        for (const auto& row : j) top = std::max(top, row["a"].get<int>());
        auto table = tel::measures::MomentTable::exact_real(top);
        table.set_exact(0, tel::make_rat(1, 1));
        for (const auto& row : j)
            table.set_exact(row["a"].get<int>(),
                            tel::rat_from_string(row["moment"].get<std::string>()));
        return table;
    }
    return tel::measures::MomentTable::from_json_string(j.dump());
}

void run_moments_compare(Output& out, const std::string& empirical_path,
                         const std::string& target_text, double z, int histogram_order) {
    using tel::measures::MomentTable;
    auto empirical = load_table(empirical_path, 2 * histogram_order);
    // Sampled tables need the (2a)-th moment to put a standard error on the
    // a-th, so only the bottom half of the stored orders is comparable.
    int order = empirical.is_exact() ? empirical.max_order() : empirical.max_order() / 2;
    if (order < 1)
        throw std::invalid_argument("empirical table holds too few orders to compare");

    MomentTable target = MomentTable::exact_real(0);
    std::optional<uint64_t> support_base;
    std::string head = target_text.substr(0, target_text.find(':'));
    std::string tail = target_text.find(':') == std::string::npos
                           ? std::string()
                           : target_text.substr(target_text.find(':') + 1);
    if (head == "poisson") {
        if (tail.empty()) throw std::invalid_argument("poisson target needs a rate: poisson:1");
        target = tel::measures::poisson_moments(parse_rat(tail), order);
    } else if (head == "cgauss") {
        target = tel::measures::complex_gaussian_moments(order);
    } else if (head == "qfix" || head == "qaffine") {
        if (tail.empty())
            throw std::invalid_argument(head + " target needs a field size: " + head + ":2");
        unsigned long q = std::stoul(tail);
        if (q < 2) throw std::invalid_argument("field size must be at least 2");
        target = head == "qfix" ? tel::measures::q_fix_moments(q, order)
                                : tel::measures::q_affine_fix_moments(q, order);
        support_base = q;
    } else {
        throw std::invalid_argument("unknown target " + target_text +
                                    " (poisson:rate, cgauss, qfix:q, qaffine:q)");
    }
    if (empirical.kind() != target.kind())
        throw std::invalid_argument("empirical table kind does not match the target law");

    std::vector<std::pair<int, int>> orders;
    if (empirical.kind() == tel::measures::MomentKind::Real) {
        for (int a = 1; a <= order; ++a) orders.push_back({a, 0});
    } else {
        for (int a = 0; a <= order; ++a)
            for (int b = 0; a + b <= order; ++b)
                if (a + b > 0) orders.push_back({a, b});
    }

    Timer timer(out);
    auto report = tel::measures::compare_moments(empirical, target, orders, z, support_base);
    timer.stop();
    out.emit(tel::measures::report_to_csv(report),
             nlohmann::json::parse(tel::measures::report_to_json_string(report)));
}

void run_hankel(Output& out, const std::string& table_path, int order) {
    auto table = load_table(table_path, 2 * order);
    Timer timer(out);
    auto report = tel::measures::hankel_psd(table, order);
    timer.stop();

    std::ostringstream csv;
    csv << "field,index,value\n";
    csv << "psd,," << (report.psd ? "true" : "false") << '\n';
    nlohmann::json data;
    data["psd"] = report.psd;
    if (!report.psd) {
        csv << "witness_value,," << tel::rat_to_string(report.witness_value) << '\n';
        auto wit = nlohmann::json::array();
        for (size_t i = 0; i < report.witness.size(); ++i) {
            csv << "witness," << i << ',' << tel::rat_to_string(report.witness[i]) << '\n';
            wit.push_back(tel::rat_to_string(report.witness[i]));
        }
        data["witness_value"] = tel::rat_to_string(report.witness_value);
        data["witness"] = wit;
    }
    out.emit(csv.str(), data);
}

void run_pseudo_roots(Output& out, const std::string& spec_text, uint64_t pmax, bool summary,
                      int threads) {
    auto spec = tel::arith::PseudoPolySpec::parse(spec_text);
    Timer timer(out);
    if (summary) {
        auto h = tel::arith::rho_histogram(spec, pmax, threads);
        timer.stop();
        out.emit(h.to_csv(), nlohmann::json::parse(h.to_json_string(spec.label())));
        return;
    }
    auto primes = tel::arith::primes_up_to(pmax);
    std::vector<uint32_t> zeros(primes.size());
    std::atomic<size_t> next{0};
    int workers = std::max(1, std::min<int>(threads, static_cast<int>(primes.size())));
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= primes.size()) return;
            zeros[i] = tel::arith::rho(spec, primes[i]);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    timer.stop();

    std::ostringstream csv;
    csv << "p,rho\n";
    auto rows = nlohmann::json::array();
    for (size_t i = 0; i < primes.size(); ++i) {
        csv << primes[i] << ',' << zeros[i] << '\n';
        rows.push_back({{"p", primes[i]}, {"rho", zeros[i]}});
    }
    nlohmann::json data;
    data["spec"] = spec.label();
    data["pmax"] = pmax;
    data["rows"] = rows;
    out.emit(csv.str(), data);
}

void run_expsum(Output& out, const std::string& spec_text, uint32_t p, int max_order,
                const std::string& mode, uint64_t seed, int threads) {
    auto spec = tel::arith::PseudoPolySpec::parse(spec_text);
    Timer timer(out);
    tel::measures::MomentTable table = tel::measures::MomentTable::exact_real(0);
    if (mode == "exact") {
        table = tel::arith::expsum_moments_exact(spec, p, max_order);
    } else if (mode.rfind("sampled:", 0) == 0) {
        uint64_t count = std::stoull(mode.substr(8));
        table = tel::arith::expsum_moments_sampled(spec, p, max_order, count, seed, threads);
    } else {
        throw std::invalid_argument("mode must be exact or sampled:N, got " + mode);
    }
    timer.stop();
    emit_moment_table(out, table);
}

void run_hall_check(Output& out, const std::string& spec_text, int n_max) {
    auto spec = tel::arith::PseudoPolySpec::parse(spec_text);
    Timer timer(out);
    bool holds = tel::arith::hall_check(spec, n_max);
    timer.stop();
    std::ostringstream csv;
    csv << "spec,n_max,holds\n"
        << '"' << spec.label() << "\"," << n_max << ',' << (holds ? "true" : "false") << '\n';
    out.emit(csv.str(), {{"spec", spec.label()}, {"n_max", n_max}, {"holds", holds}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition-category and random-matrix moment toolkit"};
    app.require_subcommand(1);

    Output out;
    uint64_t seed = 1;
    int threads = default_threads();

    auto record = [&out](const std::string& name, const auto& value) {
        std::ostringstream os;
        os << value;
        out.params[name] = os.str();
    };

    try {
        // bell
        {
            auto* cmd = app.add_subcommand("bell", "Bell numbers through k");
            auto k = std::make_shared<int>(0);
            cmd->add_option("--k", *k, "largest index")->required()->check(CLI::Range(0, 5000));
            add_output_flags(cmd, out);
            cmd->callback([&, k] {
                out.subcommand = "bell";
                record("k", *k);
                run_bell(out, *k);
            });
        }
        // homdim
        {
            auto* cmd = app.add_subcommand(
                "homdim", "dimension of the invariants of k tensor copies of the n-point module");
            auto k = std::make_shared<int>(0);
            auto n = std::make_shared<int>(1);
            cmd->add_option("--k", *k, "tensor power")->required()->check(CLI::Range(0, 64));
            cmd->add_option("--n", *n, "points")->required()->check(CLI::Range(1, 1000000));
            add_output_flags(cmd, out);
            cmd->callback([&, k, n] {
                out.subcommand = "homdim";
                record("k", *k);
                record("n", *n);
                run_homdim(out, *k, *n);
            });
        }
        // gram-rank
        {
            auto* cmd = app.add_subcommand(
                "gram-rank", "rank of the partition pairing matrix at an integer parameter");
            auto k = std::make_shared<int>(0);
            auto n = std::make_shared<long>(0);
            cmd->add_option("--k", *k, "partition size")->required()->check(CLI::Range(0, 64));
            cmd->add_option("--n", *n, "evaluation point")->required();
            add_output_flags(cmd, out);
            cmd->callback([&, k, n] {
                out.subcommand = "gram-rank";
                record("k", *k);
                record("n", *n);
                run_gram_rank(out, *k, *n);
            });
        }
        // rencontres
        {
            auto* cmd = app.add_subcommand(
                "rencontres", "exact fixed-point distribution of a uniform permutation");
            auto n = std::make_shared<int>(1);
            cmd->add_option("--n", *n, "degree")->required()->check(CLI::Range(0, 2000));
            add_output_flags(cmd, out);
            cmd->callback([&, n] {
                out.subcommand = "rencontres";
                record("n", *n);
                run_rencontres(out, *n);
            });
        }
        // perm-fix
        {
            auto* cmd =
                app.add_subcommand("perm-fix", "sampled fixed-point counts of permutations");
            auto n = std::make_shared<int>(1);
            auto trials = std::make_shared<uint64_t>(0);
            cmd->add_option("--n", *n, "degree")->required()->check(CLI::Range(1, 100000000));
            cmd->add_option("--trials", *trials, "sample count")->required();
            cmd->add_option("--seed", seed, "rng seed");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, n, trials] {
                out.subcommand = "perm-fix";
                record("n", *n);
                record("trials", *trials);
                record("seed", seed);
                record("threads", threads);
                Timer timer(out);
                auto dist = tel::randomlab::perm_fix_experiment(*n, *trials, seed, threads);
                timer.stop();
                emit_distribution(out, dist);
            });
        }
        // cycles
        {
            auto* cmd =
                app.add_subcommand("cycles", "sampled cycle-count statistics of permutations");
            auto n = std::make_shared<int>(1);
            auto imax = std::make_shared<int>(1);
            auto trials = std::make_shared<uint64_t>(0);
            cmd->add_option("--n", *n, "degree")->required()->check(CLI::Range(1, 100000000));
            cmd->add_option("--imax", *imax, "track cycle lengths up to this")->required();
            cmd->add_option("--trials", *trials, "sample count")->required();
            cmd->add_option("--seed", seed, "rng seed");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, n, imax, trials] {
                out.subcommand = "cycles";
                record("n", *n);
                record("imax", *imax);
                record("trials", *trials);
                record("seed", seed);
                record("threads", threads);
                run_cycles(out, *n, *imax, *trials, seed, threads);
            });
        }
        // char-moments
        {
            auto* cmd = app.add_subcommand(
                "char-moments", "moments of an irreducible symmetric-group character");
            auto lambda = std::make_shared<std::string>();
            auto n = std::make_shared<int>(1);
            auto a = std::make_shared<int>(1);
            auto mc = std::make_shared<uint64_t>(0);
            cmd->add_option("--lambda", *lambda, "partition below the top row, e.g. 2,1")
                ->required();
            cmd->add_option("--n", *n, "symmetric group degree")
                ->required()
                ->check(CLI::Range(1, 100000000));
            cmd->add_option("--a", *a, "largest moment order")->check(CLI::Range(1, 16));
            cmd->add_option("--mc", *mc, "sample instead of exact summation, with this many trials");
            cmd->add_option("--seed", seed, "rng seed");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, lambda, n, a, mc] {
                out.subcommand = "char-moments";
                record("lambda", *lambda);
                record("n", *n);
                record("a", *a);
                record("mc", *mc);
                record("seed", seed);
                record("threads", threads);
                run_char_moments(out, *lambda, *n, *a, *mc, seed, threads);
            });
        }
        // gl-fix / aff-fix
        for (bool affine : {false, true}) {
            auto* cmd = app.add_subcommand(
                affine ? "aff-fix" : "gl-fix",
                affine ? "fixed points of random affine maps over a finite field"
                       : "fixed vectors of random invertible matrices over a finite field");
            auto n = std::make_shared<int>(1);
            auto q = std::make_shared<int>(2);
            auto trials = std::make_shared<uint64_t>(0);
            auto exact = std::make_shared<bool>(false);
            cmd->add_option("--n", *n, "dimension")->required()->check(CLI::Range(1, 64));
            cmd->add_option("--q", *q, "field size")->required()->check(CLI::Range(2, 16));
            cmd->add_option("--trials", *trials, "sample count (ignored with --exact)");
            cmd->add_flag("--exact", *exact, "enumerate the whole group instead of sampling");
            cmd->add_option("--seed", seed, "rng seed");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, affine, n, q, trials, exact] {
                out.subcommand = affine ? "aff-fix" : "gl-fix";
                record("n", *n);
                record("q", *q);
                record("exact", *exact ? 1 : 0);
                if (!*exact) {
                    if (*trials == 0)
                        throw CLI::ValidationError("--trials is required without --exact");
                    record("trials", *trials);
                    record("seed", seed);
                    record("threads", threads);
                }
                run_group_fix(out, affine, *n, *q, *exact, *trials, seed, threads);
            });
        }
        // unitary-trace
        {
            auto* cmd = app.add_subcommand("unitary-trace",
                                           "mixed trace moments of Haar-random unitaries");
            auto n = std::make_shared<int>(1);
            auto max_order = std::make_shared<int>(4);
            auto trials = std::make_shared<uint64_t>(0);
            cmd->add_option("--n", *n, "matrix size")->required()->check(CLI::Range(1, 512));
            cmd->add_option("--max-order", *max_order, "largest a+b")->check(CLI::Range(0, 16));
            cmd->add_option("--trials", *trials, "sample count")->required();
            cmd->add_option("--seed", seed, "rng seed");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, n, max_order, trials] {
                out.subcommand = "unitary-trace";
                record("n", *n);
                record("max_order", *max_order);
                record("trials", *trials);
                record("seed", seed);
                record("threads", threads);
                run_unitary_trace(out, *n, *max_order, *trials, seed, threads);
            });
        }
        // moments-compare
        {
            auto* cmd = app.add_subcommand(
                "moments-compare", "compare an empirical moment table with a limit law");
            auto file = std::make_shared<std::string>();
            auto target = std::make_shared<std::string>();
            auto z = std::make_shared<double>(4.0);
            auto horder = std::make_shared<int>(4);
            cmd->add_option("--empirical", *file,
                            "moment table or histogram JSON file (as written by --json)")
                ->required();
            cmd->add_option("--target", *target, "poisson:rate, cgauss, qfix:q, or qaffine:q")
                ->required();
            cmd->add_option("--z", *z, "standard-error band width");
            cmd->add_option("--max-order", *horder,
                            "moment orders to build when the input is a histogram")
                ->check(CLI::Range(1, 16));
            add_output_flags(cmd, out);
            cmd->callback([&, file, target, z, horder] {
                out.subcommand = "moments-compare";
                record("empirical", *file);
                record("target", *target);
                record("z", *z);
                record("max_order", *horder);
                run_moments_compare(out, *file, *target, *z, *horder);
            });
        }
        // hankel
        {
            auto* cmd = app.add_subcommand(
                "hankel", "exact positive-semidefiniteness of a moment Hankel matrix");
            auto file = std::make_shared<std::string>();
            auto order = std::make_shared<int>(1);
            cmd->add_option("--table", *file, "exact moment table JSON file")->required();
            cmd->add_option("--order", *order, "Hankel matrix order")
                ->required()
                ->check(CLI::Range(0, 32));
            add_output_flags(cmd, out);
            cmd->callback([&, file, order] {
                out.subcommand = "hankel";
                record("table", *file);
                record("order", *order);
                run_hankel(out, *file, *order);
            });
        }
        // pseudo-roots
        {
            auto* cmd = app.add_subcommand(
                "pseudo-roots", "roots of a pseudopolynomial modulo every prime up to a bound");
            auto pmax = std::make_shared<uint64_t>(100);
            auto spec = std::make_shared<std::string>("builtin-F");
            auto summary = std::make_shared<bool>(false);
            cmd->add_option("--pmax", *pmax, "prime bound")->required();
            cmd->add_option("--spec", *spec, "builtin-F or poly:c0,c1,...");
            cmd->add_flag("--summary", *summary, "emit the root-count histogram instead of rows");
            cmd->add_option("--threads", threads, "worker threads");
            add_output_flags(cmd, out);
            cmd->callback([&, pmax, spec, summary] {
                out.subcommand = "pseudo-roots";
                record("pmax", *pmax);
                record("spec", *spec);
                record("summary", *summary ? 1 : 0);
                record("threads", threads);
                run_pseudo_roots(out, *spec, *pmax, *summary, threads);
            });
        }
        // expsum
        {
            auto* cmd = app.add_subcommand(
                "expsum", "moments of normalized exponential sums of a pseudopolynomial");
            auto p = std::make_shared<uint32_t>(0);
            auto max_order = std::make_shared<int>(2);
            auto mode = std::make_shared<std::string>("exact");
            auto spec = std::make_shared<std::string>("builtin-F");
            cmd->add_option("--p", *p, "prime modulus")->required();
            cmd->add_option("--max-order", *max_order, "largest a+b")->check(CLI::Range(0, 16));
            cmd->add_option("--mode", *mode, "exact or sampled:N");
            cmd->add_option("--spec", *spec, "builtin-F or poly:c0,c1,...");
            cmd->add_option("--seed", seed, "rng seed (sampled mode)");
            cmd->add_option("--threads", threads, "worker threads (sampled mode)");
            add_output_flags(cmd, out);
            cmd->callback([&, p, max_order, mode, spec] {
                out.subcommand = "expsum";
                record("p", *p);
                record("max_order", *max_order);
                record("mode", *mode);
                record("spec", *spec);
                record("seed", seed);
                record("threads", threads);
                run_expsum(out, *spec, *p, *max_order, *mode, seed, threads);
            });
        }
        // hall-check
        {
            auto* cmd = app.add_subcommand(
                "hall-check", "divisibility of differences for a pseudopolynomial");
            auto n_max = std::make_shared<int>(0);
            auto spec = std::make_shared<std::string>("builtin-F");
            cmd->add_option("--N", *n_max, "largest index")->required()->check(CLI::Range(0, 5000));
            cmd->add_option("--spec", *spec, "builtin-F or poly:c0,c1,...");
            add_output_flags(cmd, out);
            cmd->callback([&, n_max, spec] {
                out.subcommand = "hall-check";
                record("N", *n_max);
                record("spec", *spec);
                run_hall_check(out, *spec, *n_max);
            });
        }

        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tel::SizeGuardError& e) {
        std::cerr << "size guard: " << e.what()
                  << " (set TEL_SIZE_GUARD=off to lift the cap)\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
