#include "tel/set_partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tel/errors.hpp"

namespace tel::combinatorics {

SetPartition::SetPartition(std::vector<int> rgs) : rgs_(std::move(rgs)) {
    int mx = -1;
    for (size_t i = 0; i < rgs_.size(); ++i) {
        int b = rgs_[i];
        if (b < 0 || b > mx + 1)
            throw std::invalid_argument("not a restricted growth string at position " +
                                        std::to_string(i));
        mx = std::max(mx, b);
    }
    nblocks_ = mx + 1;
}

SetPartition SetPartition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    if (n < 0) throw std::invalid_argument("negative ground set size");
    std::vector<int> owner(static_cast<size_t>(n), -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw std::invalid_argument("empty block");
        for (int e : blocks[b]) {
            if (e < 0 || e >= n) throw std::invalid_argument("block element out of range");
            if (owner[static_cast<size_t>(e)] != -1)
                throw std::invalid_argument("element in two blocks");
            owner[static_cast<size_t>(e)] = static_cast<int>(b);
        }
    }
    // Relabel by first appearance to get the canonical encoding.
    std::vector<int> relabel(blocks.size(), -1);
    std::vector<int> rgs(static_cast<size_t>(n));
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int b = owner[static_cast<size_t>(i)];
        if (b == -1) throw std::invalid_argument("element missing from all blocks");
        if (relabel[static_cast<size_t>(b)] == -1) relabel[static_cast<size_t>(b)] = next++;
        rgs[static_cast<size_t>(i)] = relabel[static_cast<size_t>(b)];
    }
    return SetPartition(std::move(rgs));
}

SetPartition SetPartition::singletons(int n) {
    std::vector<int> rgs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rgs[static_cast<size_t>(i)] = i;
    return SetPartition(std::move(rgs));
}

SetPartition SetPartition::one_block(int n) {
    return SetPartition(std::vector<int>(static_cast<size_t>(n), 0));
}

std::vector<std::vector<int>> SetPartition::blocks() const {
    std::vector<std::vector<int>> out(static_cast<size_t>(nblocks_));
    for (int i = 0; i < ground_size(); ++i)
        out[static_cast<size_t>(rgs_[static_cast<size_t>(i)])].push_back(i);
    return out;
}

namespace {

void extend(std::vector<int>& cur, int i, int k, int mx,
            std::vector<SetPartition>& out) {
    if (i == k) {
        out.emplace_back(cur);
        return;
    }
    for (int b = 0; b <= mx + 1; ++b) {
        cur[static_cast<size_t>(i)] = b;
        extend(cur, i + 1, k, std::max(mx, b), out);
    }
}

}  // namespace

std::vector<SetPartition> enumerate_set_partitions(int k) {
    if (k < 0) throw std::invalid_argument("negative set size");
    if (k > 14 && size_guard_enabled())
        throw SizeGuardError("enumerate_set_partitions: k > 14 refused (about 1.9e8 partitions "
                             "at k = 14; set TEL_SIZE_GUARD=off to force)");
    std::vector<SetPartition> out;
    if (k == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> cur(static_cast<size_t>(k), 0);
    extend(cur, 1, k, 0, out);
    return out;
}

}  // namespace tel::combinatorics
