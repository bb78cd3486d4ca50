#pragma once

// Finite-window integer sets. Every set-valued operation in this library is
// windowed: an IndexSet is its closed window [lo, hi] plus the sorted members
// found inside it. No operation pretends to decide membership outside its
// window.

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace nilbracket {

struct Window {
    long long lo = 0;
    long long hi = 0;

    Window() = default;
    Window(long long lo_, long long hi_) : lo(lo_), hi(hi_) {
        if (lo > hi) throw std::invalid_argument("Window: lo > hi");
    }

    bool contains(long long n) const { return lo <= n && n <= hi; }
    long long length() const { return hi - lo + 1; }
};

class IndexSet {
   public:
    explicit IndexSet(Window window) : window_(window) {}

    // Validates sortedness, uniqueness, and window membership.
    IndexSet(Window window, std::vector<long long> members)
        : window_(window), members_(std::move(members)) {
        for (std::size_t t = 0; t < members_.size(); ++t) {
            if (!window_.contains(members_[t]))
                throw std::invalid_argument("IndexSet: member outside window");
            if (t > 0 && members_[t - 1] >= members_[t])
                throw std::invalid_argument("IndexSet: members not strictly increasing");
        }
    }

    // Sorts and deduplicates, then clips to the window.
    static IndexSet collect(Window window, std::vector<long long> values) {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        std::vector<long long> kept;
        for (long long v : values)
            if (window.contains(v)) kept.push_back(v);
        return IndexSet(window, std::move(kept));
    }

    const Window& window() const { return window_; }
    const std::vector<long long>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }

    bool contains(long long n) const {
        return std::binary_search(members_.begin(), members_.end(), n);
    }

    bool is_subset_of(const IndexSet& other) const {
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                             members_.end());
    }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.window_.lo == b.window_.lo && a.window_.hi == b.window_.hi &&
               a.members_ == b.members_;
    }

   private:
    Window window_;
    std::vector<long long> members_;
};

}  // namespace nilbracket
