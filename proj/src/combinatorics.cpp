#include "tel/combinatorics.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace tel::combinatorics {

Int bell(unsigned k) {
    std::vector<Int> a(k + 1);
    a[0] = 1;
    for (unsigned m = 0; m < k; ++m) {
        Int next = 0;
        for (unsigned r = 0; r <= m; ++r) next += binomial(m, r) * a[r];
        a[m + 1] = next;
    }
    return a[k];
}

Int stirling2(unsigned k, unsigned j) {
    if (j > k) return 0;
    // S(k,j) = j*S(k-1,j) + S(k-1,j-1), one row at a time.
    std::vector<Int> row(j + 1);
    row[0] = 1;
    for (unsigned i = 1; i <= k; ++i) {
        for (unsigned b = std::min<unsigned>(i, j); b >= 1; --b)
            row[b] = Int(b) * row[b] + row[b - 1];
        row[0] = 0;
    }
    return row[j];
}

Int partitions_with_at_most(unsigned k, unsigned n) {
    Int total = 0;
    for (unsigned j = 0; j <= std::min(k, n); ++j) total += stirling2(k, j);
    return total;
}

Int gauss_binomial(unsigned m, unsigned j, unsigned long q) {
    if (q < 2) throw std::invalid_argument("gauss_binomial: q must be at least 2");
    if (j > m) return 0;
    Rat r = 1;
    Int qi(static_cast<unsigned long>(q));
    for (unsigned i = 0; i < j; ++i)
        r *= Rat(int_pow(qi, m - i) - 1) / Rat(int_pow(qi, j - i) - 1);
    if (r.get_den() != 1) throw std::logic_error("gauss_binomial: non-integer result");
    return r.get_num();
}

Int count_subspaces(unsigned m, unsigned long q) {
    Int total = 0;
    for (unsigned j = 0; j <= m; ++j) total += gauss_binomial(m, j, q);
    return total;
}

Int count_affine_subspaces(unsigned m, unsigned long q) {
    Int total = 0;
    Int qi(static_cast<unsigned long>(q));
    for (unsigned j = 0; j <= m; ++j)
        total += int_pow(qi, m - j) * gauss_binomial(m, j, q);
    return total;
}

Int subfactorial(unsigned m) {
    Int d = 1;
    for (unsigned i = 1; i <= m; ++i) {
        d *= i;
        if (i % 2 == 0)
            d += 1;
        else
            d -= 1;
    }
    return d;
}

Int rencontres(unsigned n, unsigned r) {
    if (r > n) throw std::invalid_argument("rencontres: r > n");
    return binomial(n, r) * subfactorial(n - r);
}

CycleType CycleType::from_multiplicities(int n, std::map<int, int> mult) {
    CycleType ct;
    ct.n_ = n;
    long long total = 0;
    for (auto it = mult.begin(); it != mult.end();) {
        auto [len, count] = *it;
        if (len <= 0 || count < 0) throw std::invalid_argument("bad cycle type entry");
        total += static_cast<long long>(len) * count;
        if (count == 0)
            it = mult.erase(it);
        else
            ++it;
    }
    if (total != n) throw std::invalid_argument("cycle lengths do not sum to n");
    ct.mult_ = std::move(mult);
    return ct;
}

CycleType CycleType::from_cycle_lengths(const std::vector<int>& lengths) {
    std::map<int, int> mult;
    int n = 0;
    for (int len : lengths) {
        if (len <= 0) throw std::invalid_argument("nonpositive cycle length");
        ++mult[len];
        n += len;
    }
    return from_multiplicities(n, std::move(mult));
}

int CycleType::multiplicity(int i) const {
    auto it = mult_.find(i);
    return it == mult_.end() ? 0 : it->second;
}

std::vector<int> CycleType::lengths_desc() const {
    std::vector<int> out;
    for (auto it = mult_.rbegin(); it != mult_.rend(); ++it)
        out.insert(out.end(), static_cast<size_t>(it->second), it->first);
    return out;
}

Int CycleType::class_size() const {
    // n! / prod_i i^{m_i} m_i!
    Int denom = 1;
    for (auto [len, count] : mult_)
        denom *= int_pow(Int(len), static_cast<unsigned long>(count)) *
                 factorial(static_cast<unsigned long>(count));
    Int size = factorial(static_cast<unsigned long>(n_));
    assert(size % denom == 0);
    return size / denom;
}

IntegerPartition::IntegerPartition(std::vector<int> parts) : parts_(std::move(parts)) {
    int prev = parts_.empty() ? 0 : parts_.front();
    for (int p : parts_) {
        if (p <= 0) throw std::invalid_argument("nonpositive part");
        if (p > prev) throw std::invalid_argument("parts not weakly decreasing");
        prev = p;
        weight_ += p;
    }
}

IntegerPartition IntegerPartition::padded(int n) const {
    int head = n - weight_;
    if (head < 0 || (!parts_.empty() && head < parts_.front()))
        throw std::invalid_argument("padded: n too small for a valid first part");
    if (head == 0) return *this;
    std::vector<int> parts;
    parts.reserve(parts_.size() + 1);
    parts.push_back(head);
    parts.insert(parts.end(), parts_.begin(), parts_.end());
    return IntegerPartition(std::move(parts));
}

namespace {

void partitions_rec(int remaining, int maxpart, std::vector<int>& cur,
                    std::vector<IntegerPartition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = std::min(maxpart, remaining); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<IntegerPartition> enumerate_integer_partitions(int n) {
    if (n < 0) throw std::invalid_argument("negative n");
    std::vector<IntegerPartition> out;
    std::vector<int> cur;
    partitions_rec(n, n, cur, out);
    return out;
}

std::vector<CycleType> enumerate_cycle_types(int n) {
    std::vector<CycleType> out;
    for (const auto& lambda : enumerate_integer_partitions(n))
        out.push_back(CycleType::from_cycle_lengths(lambda.parts()));
    return out;
}

namespace {

using Memo = std::map<std::pair<std::vector<int>, size_t>, Int>;

// First-column beta-set of a partition: beta_i = parts[i] + (r-1-i),
// strictly decreasing. Removing a border strip of length c is moving one
// beta entry down by c into an unoccupied slot; the sign is (-1)^(number
// of occupied slots jumped over).
Int strip_rec(const std::vector<int>& parts, const std::vector<int>& cycles, size_t idx,
              Memo& memo) {
    if (parts.empty()) {
        assert(idx == cycles.size());
        return 1;
    }
    auto key = std::make_pair(parts, idx);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int c = cycles[idx];
    int r = static_cast<int>(parts.size());
    std::vector<int> beta(parts.size());
    for (int i = 0; i < r; ++i)
        beta[static_cast<size_t>(i)] = parts[static_cast<size_t>(i)] + (r - 1 - i);

    Int total = 0;
    for (int i = 0; i < r; ++i) {
        int s = beta[static_cast<size_t>(i)];
        int target = s - c;
        if (target < 0) continue;
        if (std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
        int height = 0;
        for (int u : beta)
            if (target < u && u < s) ++height;

        std::vector<int> nb = beta;
        nb[static_cast<size_t>(i)] = target;
        std::sort(nb.begin(), nb.end(), std::greater<int>());
        std::vector<int> np;
        np.reserve(nb.size());
        for (int j = 0; j < r; ++j) {
            int part = nb[static_cast<size_t>(j)] - (r - 1 - j);
            assert(part >= 0);
            if (part > 0) np.push_back(part);
        }
        Int sub = strip_rec(np, cycles, idx + 1, memo);
        if (height % 2 == 0)
            total += sub;
        else
            total -= sub;
    }
    memo.emplace(std::move(key), total);
    return total;
}

}  // namespace

Int character_value(const IntegerPartition& lambda, const CycleType& mu) {
    if (lambda.weight() != mu.n())
        throw std::invalid_argument("character_value: partition and class sizes differ");
    std::vector<int> cycles = mu.lengths_desc();
    Memo memo;
    return strip_rec(lambda.parts(), cycles, 0, memo);
}

}  // namespace tel::combinatorics
