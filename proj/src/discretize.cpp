#include "mlabel/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "mlabel/common.hpp"

namespace mlabel {
namespace {

double entropy2(std::size_t pos, std::size_t total) {
    if (total == 0 || pos == 0 || pos == total) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

int classes_present(std::size_t pos, std::size_t total) {
    if (total == 0) return 0;
    return (pos == 0 || pos == total) ? 1 : 2;
}

// Recursive split of sorted (value, class) pairs over [lo, hi).
void split(const std::vector<std::pair<double, std::uint8_t>>& s, std::size_t lo, std::size_t hi,
           std::vector<double>& cuts) {
    const std::size_t n = hi - lo;
    if (n < 2) return;

    std::size_t pos_total = 0;
    for (std::size_t i = lo; i < hi; ++i) pos_total += s[i].second;
    const double ent_s = entropy2(pos_total, n);
    if (ent_s == 0.0) return;  // pure

    // Scan candidate boundaries between adjacent distinct values, tracking
    // left-side counts incrementally.
    double best_entropy = -1.0;
    double best_cut = 0.0;
    std::size_t best_i = 0;     // split point: left = [lo, best_i)
    std::size_t pos_left = 0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        pos_left += s[i - 1].second;
        if (s[i].first == s[i - 1].first) continue;
        const std::size_t n_left = i - lo;
        const std::size_t n_right = hi - i;
        const double e = (static_cast<double>(n_left) * entropy2(pos_left, n_left) +
                          static_cast<double>(n_right) * entropy2(pos_total - pos_left, n_right)) /
                         static_cast<double>(n);
        if (best_entropy < 0.0 || e < best_entropy) {
            best_entropy = e;
            best_cut = (s[i - 1].first + s[i].first) / 2.0;
            best_i = i;
        }
    }
    if (best_entropy < 0.0) return;  // constant feature on this interval

    const double gain = ent_s - best_entropy;
    std::size_t pos_l = 0;
    for (std::size_t i = lo; i < best_i; ++i) pos_l += s[i].second;
    const std::size_t n_left = best_i - lo;
    const std::size_t n_right = hi - best_i;
    const double ent_l = entropy2(pos_l, n_left);
    const double ent_r = entropy2(pos_total - pos_l, n_right);
    const int k = classes_present(pos_total, n);
    const int k1 = classes_present(pos_l, n_left);
    const int k2 = classes_present(pos_total - pos_l, n_right);

    const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                         (k * ent_s - k1 * ent_l - k2 * ent_r);
    const double threshold =
        (std::log2(static_cast<double>(n) - 1.0) + delta) / static_cast<double>(n);
    if (gain <= threshold) return;

    cuts.push_back(best_cut);
    split(s, lo, best_i, cuts);
    split(s, best_i, hi, cuts);
}

}  // namespace

std::vector<double> mdl_cut_points(const std::vector<double>& values,
                                   const std::vector<std::uint8_t>& classes) {
    if (values.size() != classes.size())
        throw error("discretization needs one class per value");
    if (values.size() < 2) throw error("discretization needs at least two instances");
    bool has_pos = false, has_neg = false;
    for (auto c : classes) (c ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw error("degenerate training set: only one class present");

    std::vector<std::pair<double, std::uint8_t>> s(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) s[i] = {values[i], classes[i]};
    std::sort(s.begin(), s.end());

    std::vector<double> cuts;
    split(s, 0, s.size(), cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

std::uint32_t apply_cuts(const std::vector<double>& cuts, double value) {
    // lower_bound: first cut >= value; value == cut goes left.
    return static_cast<std::uint32_t>(std::lower_bound(cuts.begin(), cuts.end(), value) -
                                      cuts.begin());
}

}  // namespace mlabel
