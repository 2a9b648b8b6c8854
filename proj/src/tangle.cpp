#include "tangle/tangle.hpp"

#include <algorithm>
#include <string>

namespace tangle {

void TipSet::insert(TxId id) {
  if (contains(id)) return;
  if (index(id) >= pos_.size()) pos_.resize(index(id) + 1, -1);
  pos_[index(id)] = static_cast<std::int64_t>(items_.size());
  items_.push_back(id);
}

void TipSet::erase(TxId id) {
  if (!contains(id)) return;
  const auto at = static_cast<std::size_t>(pos_[index(id)]);
  const TxId last = items_.back();
  items_[at] = last;
  pos_[index(last)] = static_cast<std::int64_t>(at);
  items_.pop_back();
  pos_[index(id)] = -1;
}

std::span<const TxId> ConflictRegistry::members(ConflictSetId set) const {
  auto it = sets_.find(set);
  if (it == sets_.end()) return {};
  return it->second;
}

std::optional<ConflictSummary> merge_summaries(const ConflictSummary& a, const ConflictSummary& b) {
  ConflictSummary out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      if (ia->second != ib->second) return std::nullopt;
      out.push_back(*ia);
      ++ia;
      ++ib;
    }
  }
  return out;
}

TangleState::TangleState() {
  txs_.push_back(Transaction{kGenesis, {}, 0.0, 0.0, Issuer::Honest, std::nullopt});
  children_.emplace_back();
  weight_.push_back(Transaction::own_weight());
  summary_.emplace_back();
  tips_.insert(kGenesis);
  mark_.push_back(0);
}

const Transaction& TangleState::tx(TxId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::UnknownTransaction, "transaction " + std::to_string(index(id)));
  }
  return txs_[index(id)];
}

std::span<const TxId> TangleState::children(TxId id) const {
  tx(id);
  return children_[index(id)];
}

std::int64_t TangleState::cumulative_weight(TxId id) const {
  tx(id);
  return weight_[index(id)];
}

std::optional<TxId> TangleState::conflict_member(TxId id, ConflictSetId set) const {
  for (const auto& [s, member] : summary_[index(tx(id).id)]) {
    if (s == set) return member;
  }
  return std::nullopt;
}

bool TangleState::compatible(std::span<const TxId> parents, std::optional<ConflictSetId> own,
                             TxId own_id) const {
  ConflictSummary merged;
  for (TxId p : parents) {
    auto next = merge_summaries(merged, summary_[index(tx(p).id)]);
    if (!next) return false;
    merged = std::move(*next);
  }
  if (own) {
    for (const auto& entry : merged) {
      if (entry.first == *own && entry.second != own_id) return false;
    }
  }
  return true;
}

TxId TangleState::attach(std::span<const TxId> parents, const TxMeta& meta) {
  if (parents.empty()) throw Error(ErrorCode::UnknownParent, "a transaction needs at least one parent");
  for (TxId p : parents) {
    if (!contains(p)) throw Error(ErrorCode::UnknownParent, "parent " + std::to_string(index(p)));
  }
  if (meta.visible_time < meta.issue_time) {
    throw Error(ErrorCode::ConfigInvalid, "visible_time precedes issue_time");
  }
  if (meta.conflict_set && !conflicts_.has_set(*meta.conflict_set)) {
    throw Error(ErrorCode::ConfigInvalid, "unknown conflict set " + std::to_string(*meta.conflict_set));
  }

  const TxId id = tx_id(txs_.size());
  ConflictSummary summary;
  for (TxId p : parents) {
    auto next = merge_summaries(summary, summary_[index(p)]);
    if (!next) {
      throw Error(ErrorCode::ConflictViolation,
                  "parents of transaction " + std::to_string(index(id)) + " approve conflicting transactions");
    }
    summary = std::move(*next);
  }
  if (meta.conflict_set) {
    auto next = merge_summaries(summary, ConflictSummary{{*meta.conflict_set, id}});
    if (!next) {
      throw Error(ErrorCode::ConflictViolation,
                  "transaction " + std::to_string(index(id)) + " approves a member of its own conflict set");
    }
    summary = std::move(*next);
  }

  txs_.push_back(Transaction{id, {parents.begin(), parents.end()}, meta.issue_time, meta.visible_time,
                             meta.issuer, meta.conflict_set});
  children_.emplace_back();
  weight_.push_back(Transaction::own_weight());
  summary_.push_back(std::move(summary));
  mark_.push_back(0);
  if (meta.conflict_set) conflicts_.add(*meta.conflict_set, id);

  ++epoch_;
  std::vector<TxId> stack;
  for (TxId p : parents) {
    if (mark_[index(p)] == epoch_) continue;
    mark_[index(p)] = epoch_;
    children_[index(p)].push_back(id);
    tips_.erase(p);
    stack.push_back(p);
  }
  tips_.insert(id);

  while (!stack.empty()) {
    const TxId cur = stack.back();
    stack.pop_back();
    weight_[index(cur)] += Transaction::own_weight();
    for (TxId p : txs_[index(cur)].parents) {
      if (mark_[index(p)] != epoch_) {
        mark_[index(p)] = epoch_;
        stack.push_back(p);
      }
    }
  }
  return id;
}

ConflictSetId TangleState::open_conflict_set(TxId member) {
  tx(member);
  if (txs_[index(member)].conflict_set) {
    throw Error(ErrorCode::ConflictViolation,
                "transaction " + std::to_string(index(member)) + " already belongs to a conflict set");
  }
  const ConflictSetId set = conflicts_.open_set();
  conflicts_.add(set, member);
  txs_[index(member)].conflict_set = set;

  ++epoch_;
  std::vector<TxId> stack{member};
  mark_[index(member)] = epoch_;
  while (!stack.empty()) {
    const TxId cur = stack.back();
    stack.pop_back();
    auto& s = summary_[index(cur)];
    s.insert(std::upper_bound(s.begin(), s.end(), std::pair{set, member}), {set, member});
    for (TxId c : children_[index(cur)]) {
      if (mark_[index(c)] != epoch_) {
        mark_[index(c)] = epoch_;
        stack.push_back(c);
      }
    }
  }
  return set;
}

void TangleState::publish(TxId id, double visible_time) {
  auto& t = txs_[index(tx(id).id)];
  t.visible_time = std::max(t.issue_time, std::min(t.visible_time, visible_time));
}

bool TangleState::in_past_cone(TxId of, TxId target) const {
  tx(of);
  tx(target);
  if (target == of) return true;
  if (target > of) return false;
  const std::size_t base = index(target);
  std::vector<char> seen(index(of) - base + 1, 0);
  std::vector<TxId> stack{of};
  while (!stack.empty()) {
    const TxId cur = stack.back();
    stack.pop_back();
    for (TxId p : txs_[index(cur)].parents) {
      if (p == target) return true;
      if (p < target || seen[index(p) - base]) continue;
      seen[index(p) - base] = 1;
      stack.push_back(p);
    }
  }
  return false;
}

std::size_t TangleState::height(TxId id) const {
  tx(id);
  std::vector<std::size_t> h(index(id) + 1, 0);
  for (std::size_t i = 1; i <= index(id); ++i) {
    for (TxId p : txs_[i].parents) h[i] = std::max(h[i], h[index(p)] + 1);
  }
  return h[index(id)];
}

std::size_t TangleState::depth(TxId id) const {
  tx(id);
  std::vector<std::size_t> d(size(), 0);
  for (std::size_t i = size(); i-- > index(id);) {
    for (TxId c : children_[i]) d[i] = std::max(d[i], d[index(c)] + 1);
  }
  return d[index(id)];
}

}  // namespace tangle
