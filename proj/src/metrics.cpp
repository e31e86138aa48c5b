#include "adrcnn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "adrcnn/errors.hpp"

namespace adrcnn {

ConfusionCounts confusion(const std::vector<double>& scores,
                          const std::vector<int>& labels, double tau) {
  if (scores.empty() || scores.size() != labels.size())
    throw InvalidArgument("confusion: size mismatch or empty input");
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= tau;
    const bool actual = labels[i] != 0;
    if (predicted && actual)
      ++c.tp;
    else if (predicted && !actual)
      ++c.fp;
    else if (!predicted && actual)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

namespace {
double ratio(long num, long denom) {
  return denom == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(denom);
}
}  // namespace

MetricsReport point_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw InvalidArgument("point_metrics: empty counts");
  MetricsReport r;
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.specificity = ratio(c.tn, c.tn + c.fp);
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw InvalidArgument("auroc: size mismatch or empty input");
  long pos = 0;
  for (int y : labels) pos += y != 0 ? 1 : 0;
  const long neg = static_cast<long>(labels.size()) - pos;
  if (pos == 0 || neg == 0)
    throw InvalidArgument("auroc: needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tied runs; rank sum of the positives gives the
  // Mann-Whitney U statistic.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] != 0) pos_rank_sum += midrank;
    i = j;
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(pos) *
                                      (static_cast<double>(pos) + 1.0);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace adrcnn
