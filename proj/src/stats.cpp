#include "glomorph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glomorph/errors.hpp"

namespace glomorph {
namespace stats {
namespace {

// Kolmogorov survival function Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100000; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw EmptySampleError("ks_two_sample requires nonempty samples");

    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = double(sa.size()), nb = double(sb.size());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() && ib < sb.size()) {
        const double x = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= x) ++ia;
        while (ib < sb.size() && sb[ib] <= x) ++ib;
        d = std::max(d, std::abs(double(ia) / na - double(ib) / nb));
    }
    // Tails after one sample is exhausted only shrink the gap; d is final.

    const double n_eff = na * nb / (na + nb);
    return {d, kolmogorov_q(std::sqrt(n_eff) * d)};
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw EmptySampleError("pearson requires equal-length samples");
    const std::size_t n = a.size();
    if (n < 2) throw EmptySampleError("pearson requires n >= 2");

    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw DegenerateVarianceError("pearson undefined for constant input");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

BlandAltman bland_altman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw EmptySampleError("bland_altman requires equal-length samples");
    const std::size_t n = a.size();
    if (n < 2) throw EmptySampleError("bland_altman requires n >= 2");

    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = a[i] - b[i];
    const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / double(n);
    double ss = 0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / double(n - 1));

    BlandAltman r;
    r.mean_diff = mean;
    r.loa_low = mean - 1.96 * sd;
    r.loa_high = mean + 1.96 * sd;
    r.degenerate = sd == 0.0;
    std::size_t within = 0;
    for (double d : diffs)
        if (d >= r.loa_low && d <= r.loa_high) ++within;
    r.pct_within = double(within) / double(n);
    return r;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw EmptySampleError("roc_auc requires matched nonempty inputs");

    long pos = 0, neg = 0;
    for (bool l : labels) (l ? pos : neg) += 1;
    if (pos == 0 || neg == 0)
        throw SingleClassError("roc_auc requires both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return scores[i] > scores[j];
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    long tp = 0, fp = 0;
    double auc = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Consume the whole tie group at this threshold.
        const double threshold = scores[order[i]];
        long dtp = 0, dfp = 0;
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] ? dtp : dfp) += 1;
            ++i;
        }
        const double fpr0 = double(fp) / double(neg), tpr0 = double(tp) / double(pos);
        tp += dtp;
        fp += dfp;
        const double fpr1 = double(fp) / double(neg), tpr1 = double(tp) / double(pos);
        auc += (fpr1 - fpr0) * (tpr1 + tpr0) / 2.0;
        curve.points.emplace_back(fpr1, tpr1);
    }
    curve.auc = auc;
    return curve;
}

}  // namespace stats
}  // namespace glomorph
