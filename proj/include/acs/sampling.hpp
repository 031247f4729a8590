#pragma once

#include <cstdint>
#include <vector>

#include "acs/core.hpp"
#include "acs/rng.hpp"

namespace acs {

enum class StreamMode { WithReplacement, WithoutReplacement };

// Uniform index draws over [0, n). WithoutReplacement runs a lazy
// Fisher-Yates shuffle and exhausts after n draws.
class IndexStream {
 public:
  IndexStream(StreamMode mode, int n, std::uint64_t seed);

  int next();  // throws std::logic_error once exhausted
  bool exhausted() const;
  int drawn() const { return drawn_; }
  StreamMode mode() const { return mode_; }

 private:
  StreamMode mode_;
  int n_;
  int drawn_ = 0;
  std::vector<int> perm_;
  Rng rng_;
};

// Serves labels in {0,1}. Stochastic instances resample Bernoulli(eta_i) on
// every call; persistent instances return the fixed realization. Every call
// counts as one consumed label.
class LabelOracle {
 public:
  LabelOracle(const Instance& inst, std::uint64_t seed);

  int observe(int item);
  long query_count() const { return queries_; }
  int n() const { return inst_->n; }

 private:
  const Instance* inst_;
  Rng rng_;
  long queries_ = 0;
};

// Elimination runs on rewards in [-1,1]; classification recenters labels,
// tests plug in other distributions.
class RewardSource {
 public:
  virtual ~RewardSource() = default;
  virtual double observe(int item) = 0;
  virtual long queries() const = 0;
  virtual int n() const = 0;
};

class LabelRewardSource final : public RewardSource {
 public:
  LabelRewardSource(const Instance& inst, std::uint64_t seed) : oracle_(inst, seed) {}
  double observe(int item) override { return 2.0 * oracle_.observe(item) - 1.0; }
  long queries() const override { return oracle_.query_count(); }
  int n() const override { return oracle_.n(); }

 private:
  LabelOracle oracle_;
};

}  // namespace acs
