#include "tangle/view.hpp"

#include <string>

namespace tangle {

TangleView::TangleView(const TangleState& tangle) : tangle_(&tangle) {
  member_.push_back(1);
  children_.emplace_back();
  weight_.push_back(Transaction::own_weight());
  mark_.push_back(0);
  tips_.insert(kGenesis);
  count_ = 1;
}

TangleView TangleView::full(const TangleState& tangle) {
  TangleView view(tangle);
  const std::size_t n = tangle.size();
  view.member_.assign(n, 1);
  view.children_.resize(n);
  view.weight_.resize(n);
  view.mark_.assign(n, 0);
  view.tips_ = TipSet{};
  for (std::size_t i = 0; i < n; ++i) {
    const TxId id = tx_id(i);
    auto kids = tangle.children(id);
    view.children_[i].assign(kids.begin(), kids.end());
    view.weight_[i] = tangle.cumulative_weight(id);
  }
  for (TxId t : tangle.tips().items()) view.tips_.insert(t);
  view.count_ = n;
  if (n > 0) view.now_ = tangle.tx(tx_id(n - 1)).issue_time;
  return view;
}

void TangleView::reveal(TxId id) {
  const Transaction& t = tangle_->tx(id);
  if (contains(id)) return;
  if (index(id) >= member_.size()) {
    const std::size_t n = index(id) + 1;
    member_.resize(n, 0);
    children_.resize(n);
    weight_.resize(n, 0);
    mark_.resize(n, 0);
  }
  for (TxId p : t.parents) {
    if (!contains(p)) {
      throw Error(ErrorCode::UnknownParent,
                  "revealing " + std::to_string(index(id)) + " before its parent " + std::to_string(index(p)));
    }
  }

  member_[index(id)] = 1;
  weight_[index(id)] = Transaction::own_weight();
  ++count_;

  ++epoch_;
  std::vector<TxId> stack;
  for (TxId p : t.parents) {
    if (mark_[index(p)] == epoch_) continue;
    mark_[index(p)] = epoch_;
    children_[index(p)].push_back(id);
    tips_.erase(p);
    stack.push_back(p);
  }
  if (children_[index(id)].empty()) tips_.insert(id);

  while (!stack.empty()) {
    const TxId cur = stack.back();
    stack.pop_back();
    weight_[index(cur)] += Transaction::own_weight();
    for (TxId p : tangle_->tx(cur).parents) {
      if (mark_[index(p)] != epoch_) {
        mark_[index(p)] = epoch_;
        stack.push_back(p);
      }
    }
  }
}

TangleView visible_view(const TangleState& tangle, double now) {
  TangleView view(tangle);
  view.set_now(now);
  for (const Transaction& t : tangle.transactions()) {
    if (t.id == kGenesis || t.visible_time > now) continue;
    bool parents_visible = true;
    for (TxId p : t.parents) parents_visible = parents_visible && view.contains(p);
    if (parents_visible) view.reveal(t.id);
  }
  return view;
}

}  // namespace tangle
