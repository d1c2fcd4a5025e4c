#pragma once

#include <compare>
#include <vector>

namespace tel::combinatorics {

// A partition of {0, ..., n-1} in restricted-growth form: rgs[0] = 0 and
// rgs[i] <= 1 + max(rgs[0..i-1]). Block labels are forced by first
// appearance, so equal partitions have equal encodings.
class SetPartition {
public:
    SetPartition() = default;
    explicit SetPartition(std::vector<int> rgs);

    static SetPartition from_blocks(int n, const std::vector<std::vector<int>>& blocks);
    static SetPartition singletons(int n);
    static SetPartition one_block(int n);

    int ground_size() const { return static_cast<int>(rgs_.size()); }
    int block_count() const { return nblocks_; }
    int block_of(int i) const { return rgs_.at(static_cast<size_t>(i)); }
    bool same_block(int i, int j) const { return block_of(i) == block_of(j); }
    const std::vector<int>& rgs() const { return rgs_; }
    std::vector<std::vector<int>> blocks() const;

    friend bool operator==(const SetPartition& a, const SetPartition& b) {
        return a.rgs_ == b.rgs_;
    }
    friend std::strong_ordering operator<=>(const SetPartition& a, const SetPartition& b) {
        return a.rgs_ <=> b.rgs_;
    }

private:
    std::vector<int> rgs_;
    int nblocks_ = 0;
};

// All partitions of a k-set, ascending in restricted-growth-string order.
// Refuses k > 14 unless the size guard is off.
std::vector<SetPartition> enumerate_set_partitions(int k);

}  // namespace tel::combinatorics
