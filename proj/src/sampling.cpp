#include "acs/sampling.hpp"

#include <numeric>
#include <stdexcept>

namespace acs {

IndexStream::IndexStream(StreamMode mode, int n, std::uint64_t seed)
    : mode_(mode), n_(n), rng_(seed) {
  if (n < 1) throw std::invalid_argument("IndexStream: n must be >= 1");
  if (mode_ == StreamMode::WithoutReplacement) {
    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), 0);
  }
}

bool IndexStream::exhausted() const {
  return mode_ == StreamMode::WithoutReplacement && drawn_ >= n_;
}

int IndexStream::next() {
  if (mode_ == StreamMode::WithReplacement) {
    ++drawn_;
    return rng_.uniform_below(n_);
  }
  if (drawn_ >= n_) throw std::logic_error("IndexStream: exhausted");
  // Lazy Fisher-Yates: fix position `drawn_` by swapping in a uniform pick
  // from the unfixed suffix.
  int j = drawn_ + rng_.uniform_below(n_ - drawn_);
  std::swap(perm_[drawn_], perm_[j]);
  return perm_[drawn_++];
}

LabelOracle::LabelOracle(const Instance& inst, std::uint64_t seed)
    : inst_(&inst), rng_(seed) {
  inst.validate();
}

int LabelOracle::observe(int item) {
  if (item < 0 || item >= inst_->n) throw std::out_of_range("LabelOracle: item out of range");
  ++queries_;
  if (inst_->noise_mode == NoiseMode::Persistent) return (*inst_->realized_labels)[item];
  return rng_.bernoulli(inst_->eta[item]) ? 1 : 0;
}

}  // namespace acs
