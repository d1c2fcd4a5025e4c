#pragma once

// Brute-force reference implementations used only by the test suite.
// Everything here is deliberately naive: enumerate, count, compare.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

inline std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(static_cast<size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline int perm_fix_count(const std::vector<int>& p) {
    int f = 0;
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] == static_cast<int>(i)) ++f;
    return f;
}

inline std::vector<int> perm_cycle_lengths(const std::vector<int>& p) {
    std::vector<bool> seen(p.size(), false);
    std::vector<int> lengths;
    for (size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(p[j]);
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

// All set partitions of {0..k-1} as canonical minimal-label strings, found
// by deduplicating every block-label assignment. Independent of the
// restricted-growth enumeration in the library.
inline std::set<std::vector<int>> set_partitions_by_assignment(int k) {
    std::set<std::vector<int>> out;
    if (k == 0) {
        out.insert(std::vector<int>{});
        return out;
    }
    std::vector<int> assign(static_cast<size_t>(k), 0);
    while (true) {
        std::vector<int> canon(static_cast<size_t>(k), -1);
        std::map<int, int> relabel;
        for (int i = 0; i < k; ++i) {
            auto [it, fresh] = relabel.try_emplace(assign[static_cast<size_t>(i)],
                                                   static_cast<int>(relabel.size()));
            canon[static_cast<size_t>(i)] = it->second;
        }
        out.insert(canon);
        int pos = k - 1;
        while (pos >= 0 && assign[static_cast<size_t>(pos)] == k - 1) {
            assign[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++assign[static_cast<size_t>(pos)];
    }
    return out;
}

// Vectors of F_p^m encoded as base-p digit strings, p prime.
inline std::vector<std::vector<int>> all_vectors(int m, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<size_t>(m), 0);
    while (true) {
        out.push_back(v);
        int pos = m - 1;
        while (pos >= 0 && v[static_cast<size_t>(pos)] == p - 1) {
            v[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++v[static_cast<size_t>(pos)];
    }
    return out;
}

inline std::vector<int> vec_add(const std::vector<int>& a, const std::vector<int>& b, int p) {
    std::vector<int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % p;
    return c;
}

inline std::vector<int> vec_scale(int s, const std::vector<int>& a, int p) {
    std::vector<int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = (s * a[i]) % p;
    return c;
}

// Count subsets of F_p^m closed under addition and scalar multiplication.
// Only feasible for p^m <= 16 or so; that is all the oracle needs.
inline long count_subspaces_brute(int m, int p) {
    auto vecs = all_vectors(m, p);
    int total = static_cast<int>(vecs.size());
    long count = 0;
    for (uint32_t mask = 0; mask < (1u << total); ++mask) {
        std::set<std::vector<int>> s;
        for (int i = 0; i < total; ++i)
            if (mask & (1u << i)) s.insert(vecs[static_cast<size_t>(i)]);
        if (s.find(std::vector<int>(static_cast<size_t>(m), 0)) == s.end()) continue;
        bool closed = true;
        for (const auto& a : s) {
            for (const auto& b : s)
                if (s.find(vec_add(a, b, p)) == s.end()) { closed = false; break; }
            if (!closed) break;
            for (int c = 0; c < p; ++c)
                if (s.find(vec_scale(c, a, p)) == s.end()) { closed = false; break; }
            if (!closed) break;
        }
        if (closed) ++count;
    }
    return count;
}

// Nonempty subsets S with S - s0 a subspace for s0 in S (affine subspaces).
inline long count_affine_subspaces_brute(int m, int p) {
    auto vecs = all_vectors(m, p);
    int total = static_cast<int>(vecs.size());
    long count = 0;
    for (uint32_t mask = 1; mask < (1u << total); ++mask) {
        std::set<std::vector<int>> s;
        for (int i = 0; i < total; ++i)
            if (mask & (1u << i)) s.insert(vecs[static_cast<size_t>(i)]);
        const auto& base = *s.begin();
        std::set<std::vector<int>> shifted;
        for (const auto& v : s) {
            std::vector<int> d(v.size());
            for (size_t i = 0; i < v.size(); ++i) d[i] = ((v[i] - base[i]) % p + p) % p;
            shifted.insert(d);
        }
        bool closed = true;
        for (const auto& a : shifted) {
            for (const auto& b : shifted)
                if (shifted.find(vec_add(a, b, p)) == shifted.end()) { closed = false; break; }
            if (!closed) break;
            for (int c = 0; c < p; ++c)
                if (shifted.find(vec_scale(c, a, p)) == shifted.end()) { closed = false; break; }
            if (!closed) break;
        }
        if (closed) ++count;
    }
    return count;
}

}  // namespace oracle
