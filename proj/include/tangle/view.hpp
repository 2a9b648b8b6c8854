#pragma once

#include <span>
#include <vector>

#include "tangle/tangle.hpp"

namespace tangle {

/// The part of a tangle one observer can see, with tips and cumulative
/// weights recomputed inside the visible sub-DAG.
///
/// A view is downward closed: a transaction is revealed only after all of
/// its parents. Transaction metadata is read through the underlying
/// TangleState, which must outlive the view. Once built, a view is only read,
/// so it can be shared by concurrent walkers.
class TangleView {
 public:
  /// View containing only genesis.
  explicit TangleView(const TangleState& tangle);

  /// Every transaction of the tangle.
  static TangleView full(const TangleState& tangle);

  const TangleState& tangle() const { return *tangle_; }
  double now() const { return now_; }
  void set_now(double now) { now_ = now; }

  std::size_t size() const { return count_; }
  bool contains(TxId id) const { return index(id) < member_.size() && member_[index(id)]; }
  std::span<const TxId> children(TxId id) const { return children_[index(id)]; }
  std::int64_t weight(TxId id) const { return weight_[index(id)]; }
  bool is_tip(TxId id) const { return tips_.contains(id); }
  const TipSet& tips() const { return tips_; }
  std::size_t approved_count() const { return count_ - tips_.size(); }

  /// Adds an existing transaction whose parents are already in the view.
  void reveal(TxId id);

 private:
  const TangleState* tangle_;
  std::vector<char> member_;
  std::vector<std::vector<TxId>> children_;
  std::vector<std::int64_t> weight_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  TipSet tips_;
  std::size_t count_ = 0;
  double now_ = 0.0;
};

/// Sub-tangle of transactions with visible_time <= now (and all parents
/// visible). Genesis is always present.
TangleView visible_view(const TangleState& tangle, double now);

}  // namespace tangle
