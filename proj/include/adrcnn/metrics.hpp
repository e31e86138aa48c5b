#pragma once

#include <vector>

namespace adrcnn {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

// The six rows reported per evaluation.  Any 0/0 ratio is defined as 0.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  double auroc = 0.0;
};

// Prediction rule: positive iff score >= tau.
ConfusionCounts confusion(const std::vector<double>& scores,
                          const std::vector<int>& labels, double tau);

// Fills everything except auroc.
MetricsReport point_metrics(const ConfusionCounts& c);

// P(score+ > score-) + 0.5 P(score+ = score-), computed by midrank sorting.
// Requires at least one positive and one negative label.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace adrcnn
