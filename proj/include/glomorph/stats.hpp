#pragma once

#include <utility>
#include <vector>

namespace glomorph {
namespace stats {

struct KsResult {
    double d = 0;  // sup |ECDF_a - ECDF_b|
    double p = 0;  // asymptotic two-sample p-value
};

/// Two-sample Kolmogorov-Smirnov test. The p-value uses the asymptotic
/// Kolmogorov distribution with effective n = |a||b| / (|a|+|b|); it is an
/// approximation at small sample sizes. Throws EmptySampleError.
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

/// Product-moment correlation. Throws EmptySampleError (n < 2, or length
/// mismatch) and DegenerateVarianceError (either side constant).
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct BlandAltman {
    double mean_diff = 0;
    double loa_low = 0;    // mean_diff - 1.96 * sd
    double loa_high = 0;   // mean_diff + 1.96 * sd
    double pct_within = 0; // fraction of diffs inside [loa_low, loa_high]
    bool degenerate = false;  // sd == 0: limits collapse onto the mean
};

/// Agreement between paired measurements via differences a_i - b_i.
BlandAltman bland_altman(const std::vector<double>& a, const std::vector<double>& b);

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0)..(1,1)
    double auc = 0;
};

/// ROC swept over all distinct score thresholds, AUC by the trapezoidal rule
/// (ties contribute half). Throws SingleClassError when labels are all equal,
/// EmptySampleError when empty or mismatched.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

}  // namespace stats
}  // namespace glomorph
