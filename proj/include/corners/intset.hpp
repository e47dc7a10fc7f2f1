#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <unordered_set>
#include <vector>

namespace corners {

using cplx = std::complex<double>;

// Finite set of integers.  Elements are kept sorted and deduplicated; a hash
// set serves point queries so translate-intersection loops stay O(1) per
// probe.
class int_set {
public:
    int_set() = default;
    int_set(std::initializer_list<std::int64_t> xs) : elems_(xs) { canonicalize(); }
    explicit int_set(std::vector<std::int64_t> xs) : elems_(std::move(xs)) { canonicalize(); }

    static int_set interval(std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> xs;
        xs.reserve(hi >= lo ? std::size_t(hi - lo + 1) : 0);
        for (std::int64_t x = lo; x <= hi; ++x) xs.push_back(x);
        int_set s;
        s.elems_ = std::move(xs);
        s.rebuild_index();
        return s;
    }

    const std::vector<std::int64_t>& elems() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(std::int64_t x) const { return index_.count(x) != 0; }

    int_set translated(std::int64_t t) const {
        int_set s;
        s.elems_.reserve(elems_.size());
        for (auto x : elems_) s.elems_.push_back(x + t);
        s.rebuild_index();
        return s;
    }

    int_set intersect(const int_set& other) const {
        const int_set& small = size() <= other.size() ? *this : other;
        const int_set& big = size() <= other.size() ? other : *this;
        std::vector<std::int64_t> xs;
        for (auto x : small.elems_)
            if (big.contains(x)) xs.push_back(x);
        int_set s;
        s.elems_ = std::move(xs);
        s.rebuild_index();
        return s;
    }

    // |this ∩ (other + t)| without materializing the translate.
    std::size_t count_translate_overlap(const int_set& other, std::int64_t t) const {
        if (other.size() <= size()) {
            std::size_t c = 0;
            for (auto x : other.elems_) c += contains(x + t) ? 1 : 0;
            return c;
        }
        std::size_t c = 0;
        for (auto x : elems_) c += other.contains(x - t) ? 1 : 0;
        return c;
    }

    bool is_subset_of(const int_set& other) const {
        for (auto x : elems_)
            if (!other.contains(x)) return false;
        return true;
    }

    int_set sumset(const int_set& other) const {
        std::unordered_set<std::int64_t> acc;
        for (auto a : elems_)
            for (auto b : other.elems_) acc.insert(a + b);
        std::vector<std::int64_t> xs(acc.begin(), acc.end());
        return int_set(std::move(xs));
    }

    std::int64_t min() const { return elems_.front(); }
    std::int64_t max() const { return elems_.back(); }

    friend bool operator==(const int_set& a, const int_set& b) { return a.elems_ == b.elems_; }

private:
    void canonicalize() {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        rebuild_index();
    }
    void rebuild_index() {
        index_.clear();
        index_.reserve(elems_.size() * 2);
        for (auto x : elems_) index_.insert(x);
    }

    std::vector<std::int64_t> elems_;
    std::unordered_set<std::int64_t> index_;
};

// Finitely supported complex function on the integers, stored sparsely in
// support order.
class supp_fn {
public:
    supp_fn() = default;

    static supp_fn indicator(const int_set& s) {
        supp_fn f;
        for (auto x : s.elems()) f.vals_[x] = cplx(1.0, 0.0);
        return f;
    }

    void set(std::int64_t s, cplx v) {
        if (v == cplx(0.0, 0.0))
            vals_.erase(s);
        else
            vals_[s] = v;
    }
    cplx at(std::int64_t s) const {
        auto it = vals_.find(s);
        return it == vals_.end() ? cplx(0.0, 0.0) : it->second;
    }
    const std::map<std::int64_t, cplx>& entries() const { return vals_; }
    std::size_t support_size() const { return vals_.size(); }
    bool empty() const { return vals_.empty(); }
    std::int64_t support_min() const { return vals_.begin()->first; }
    std::int64_t support_max() const { return vals_.rbegin()->first; }

    supp_fn translated(std::int64_t t) const {
        supp_fn g;
        for (auto& [s, v] : vals_) g.vals_[s + t] = v;
        return g;
    }

    double l1() const {
        double a = 0;
        for (auto& [s, v] : vals_) a += std::abs(v);
        return a;
    }
    double l2sq() const {
        double a = 0;
        for (auto& [s, v] : vals_) a += std::norm(v);
        return a;
    }

private:
    std::map<std::int64_t, cplx> vals_;
};

} // namespace corners
