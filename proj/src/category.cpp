#include "tel/category.hpp"

#include <json.hpp>

#include <numeric>
#include <stdexcept>
#include <utility>

#include "tel/combinatorics.hpp"
#include "tel/errors.hpp"

namespace tel::category {

using combinatorics::enumerate_set_partitions;

namespace {

constexpr int kObjectCap = 10;

void check_object_size(int n) {
    if (n < 0) throw std::invalid_argument("negative object size");
    if (n > kObjectCap && size_guard_enabled())
        throw SizeGuardError("object larger than 10 elements refused (hom spaces grow as Bell "
                             "numbers; set TEL_SIZE_GUARD=off to force)");
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

Glued glue(const SetPartition& alpha, int x, int y, const SetPartition& beta, int z) {
    if (x < 0 || y < 0 || z < 0) throw std::invalid_argument("negative ground size");
    if (alpha.ground_size() != x + y) throw std::invalid_argument("glue: alpha ground size");
    if (beta.ground_size() != y + z) throw std::invalid_argument("glue: beta ground size");

    // Global labels: X = [0,x), Y = [x,x+y), Z = [x+y,x+y+z). Both input
    // grounds embed as an index shift (alpha by 0, beta by x).
    int total = x + y + z;
    UnionFind uf(total);
    for (int i = 1; i < x + y; ++i)
        for (int j = 0; j < i; ++j)
            if (alpha.same_block(i, j)) { uf.unite(i, j); break; }
    for (int i = 1; i < y + z; ++i)
        for (int j = 0; j < i; ++j)
            if (beta.same_block(i, j)) { uf.unite(x + i, x + j); break; }

    std::map<int, std::vector<int>> classes;
    for (int g = 0; g < total; ++g) classes[uf.find(g)].push_back(g);

    int gamma = 0;
    std::vector<std::vector<int>> kept;
    for (auto& [root, members] : classes) {
        bool inner_only = true;
        std::vector<int> outer;
        for (int g : members) {
            if (g < x) {
                inner_only = false;
                outer.push_back(g);
            } else if (g >= x + y) {
                inner_only = false;
                outer.push_back(g - y);
            }
        }
        if (inner_only)
            ++gamma;
        else
            kept.push_back(std::move(outer));
    }
    return {SetPartition::from_blocks(x + z, kept), gamma};
}

Morphism::Morphism(int source_size, int target_size) : src_(source_size), tgt_(target_size) {
    check_object_size(source_size);
    check_object_size(target_size);
}

Morphism Morphism::basis(int source_size, int target_size, const SetPartition& p, PolyT coeff) {
    Morphism m(source_size, target_size);
    m.add_term(p, coeff);
    return m;
}

Morphism Morphism::identity(int n) {
    std::vector<int> f(static_cast<size_t>(n));
    std::iota(f.begin(), f.end(), 0);
    return from_map(f, n);
}

namespace {

SetPartition pairing_partition(int n) {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) blocks.push_back({i, n + i});
    return SetPartition::from_blocks(2 * n, blocks);
}

}  // namespace

Morphism Morphism::ev(int n) { return basis(2 * n, 0, pairing_partition(n)); }

Morphism Morphism::coev(int n) { return basis(0, 2 * n, pairing_partition(n)); }

Morphism Morphism::from_map(const std::vector<int>& f, int target_size) {
    int x = static_cast<int>(f.size());
    int y = target_size;
    std::vector<std::vector<int>> blocks(static_cast<size_t>(y));
    for (int j = 0; j < y; ++j) blocks[static_cast<size_t>(j)].push_back(j);
    for (int i = 0; i < x; ++i) {
        if (f[static_cast<size_t>(i)] < 0 || f[static_cast<size_t>(i)] >= y)
            throw std::invalid_argument("from_map: image out of range");
        blocks[static_cast<size_t>(f[static_cast<size_t>(i)])].push_back(y + i);
    }
    return basis(y, x, SetPartition::from_blocks(y + x, blocks));
}

PolyT Morphism::coeff(const SetPartition& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? PolyT() : it->second;
}

Morphism& Morphism::add_term(const SetPartition& p, const PolyT& c) {
    if (p.ground_size() != src_ + tgt_)
        throw std::invalid_argument("add_term: partition ground does not match objects");
    if (c.is_zero()) return *this;
    auto [it, fresh] = terms_.try_emplace(p, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    return *this;
}

Morphism Morphism::evaluated_at(const Rat& value) const {
    Morphism out(src_, tgt_);
    for (const auto& [p, c] : terms_) out.add_term(p, PolyT(c(value)));
    return out;
}

Morphism Morphism::operator-() const {
    Morphism out(src_, tgt_);
    for (const auto& [p, c] : terms_) out.add_term(p, -c);
    return out;
}

Morphism& Morphism::operator+=(const Morphism& o) {
    if (src_ != o.src_ || tgt_ != o.tgt_) throw std::invalid_argument("adding unequal shapes");
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
}

Morphism& Morphism::operator-=(const Morphism& o) {
    if (src_ != o.src_ || tgt_ != o.tgt_)
        throw std::invalid_argument("subtracting unequal shapes");
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
}

Morphism operator*(const PolyT& c, const Morphism& m) {
    Morphism out(m.src_, m.tgt_);
    for (const auto& [p, coeff] : m.terms_) out.add_term(p, c * coeff);
    return out;
}

Morphism compose(const Morphism& later, const Morphism& first) {
    if (first.target_size() != later.source_size())
        throw std::invalid_argument("compose: middle objects differ");
    int x = first.source_size();
    int y = first.target_size();
    int z = later.target_size();
    Morphism out(x, z);
    for (const auto& [pa, ca] : first.terms())
        for (const auto& [pb, cb] : later.terms()) {
            Glued g = glue(pa, x, y, pb, z);
            out.add_term(g.partition, ca * cb * PolyT::t_power(static_cast<unsigned>(g.gamma)));
        }
    return out;
}

Morphism tensor(const Morphism& a, const Morphism& b) {
    int xa = a.source_size(), ya = a.target_size();
    int xb = b.source_size(), yb = b.target_size();
    Morphism out(xa + xb, ya + yb);
    // Result ground: a-sources, b-sources, a-targets, b-targets.
    auto relabel_a = [&](int i) { return i < xa ? i : i + xb; };
    auto relabel_b = [&](int i) { return i < xb ? xa + i : xa + ya + i; };
    for (const auto& [pa, ca] : a.terms())
        for (const auto& [pb, cb] : b.terms()) {
            std::vector<std::vector<int>> blocks;
            for (const auto& blk : pa.blocks()) {
                std::vector<int> nb;
                for (int e : blk) nb.push_back(relabel_a(e));
                blocks.push_back(std::move(nb));
            }
            for (const auto& blk : pb.blocks()) {
                std::vector<int> nb;
                for (int e : blk) nb.push_back(relabel_b(e));
                blocks.push_back(std::move(nb));
            }
            out.add_term(SetPartition::from_blocks(xa + xb + ya + yb, blocks), ca * cb);
        }
    return out;
}

Morphism transpose(const Morphism& a) {
    int x = a.source_size(), y = a.target_size();
    Morphism out(y, x);
    for (const auto& [p, c] : a.terms()) {
        std::vector<std::vector<int>> blocks;
        for (const auto& blk : p.blocks()) {
            std::vector<int> nb;
            for (int e : blk) nb.push_back(e < x ? y + e : e - x);
            blocks.push_back(std::move(nb));
        }
        out.add_term(SetPartition::from_blocks(x + y, blocks), c);
    }
    return out;
}

Int hom_dim_generic(int x, int y) {
    if (x < 0 || y < 0) throw std::invalid_argument("negative object size");
    return combinatorics::bell(static_cast<unsigned>(x + y));
}

Int hom_dim_repsn_unit_std(unsigned k, unsigned n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    return combinatorics::partitions_with_at_most(k, n);
}

Int integer_matrix_rank(std::vector<std::vector<Int>> m) {
    if (m.empty() || m[0].empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t rank = 0;
    // One-step fraction-free elimination: each update divides exactly by
    // the previous pivot (Sylvester identity), keeping entries integral.
    Int prev = 1;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (size_t i = rank + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                Int num = m[rank][c] * m[i][j] - m[i][c] * m[rank][j];
                mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return Int(static_cast<unsigned long>(rank));
}

Int gram_rank_at(unsigned k, long n) {
    if (n < 1) throw std::invalid_argument("gram_rank_at: n must be positive");
    if (k > 10 && size_guard_enabled())
        throw SizeGuardError("gram_rank_at: k > 10 refused (matrix side is bell(k); set "
                             "TEL_SIZE_GUARD=off to force)");
    auto partitions = enumerate_set_partitions(static_cast<int>(k));
    size_t d = partitions.size();
    std::vector<std::vector<Int>> g(d, std::vector<Int>(d));
    Int base(n);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = i; j < d; ++j) {
            UnionFind uf(static_cast<int>(k));
            for (unsigned e = 1; e < k; ++e)
                for (unsigned f = 0; f < e; ++f) {
                    if (partitions[i].same_block(static_cast<int>(e), static_cast<int>(f)) ||
                        partitions[j].same_block(static_cast<int>(e), static_cast<int>(f)))
                        uf.unite(static_cast<int>(e), static_cast<int>(f));
                }
            int classes = 0;
            for (unsigned e = 0; e < k; ++e)
                if (uf.find(static_cast<int>(e)) == static_cast<int>(e)) ++classes;
            g[i][j] = int_pow(base, static_cast<unsigned>(classes));
            g[j][i] = g[i][j];
        }
    }
    return integer_matrix_rank(std::move(g));
}

std::string to_json_string(const Morphism& m) {
    nlohmann::json j;
    j["source_size"] = m.source_size();
    j["target_size"] = m.target_size();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, c] : m.terms()) {
        nlohmann::json t;
        t["rgs"] = p.rgs();
        std::vector<std::string> coeffs;
        for (int d = 0; d <= c.degree(); ++d)
            coeffs.push_back(rat_to_string(c.coeff(static_cast<unsigned>(d))));
        t["coeffs"] = coeffs;
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

Morphism morphism_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Morphism m(j.at("source_size").get<int>(), j.at("target_size").get<int>());
    for (const auto& t : j.at("terms")) {
        SetPartition p(t.at("rgs").get<std::vector<int>>());
        std::vector<Rat> coeffs;
        for (const auto& s : t.at("coeffs"))
            coeffs.push_back(rat_from_string(s.get<std::string>()));
        m.add_term(p, PolyT(std::move(coeffs)));
    }
    return m;
}

}  // namespace tel::category
