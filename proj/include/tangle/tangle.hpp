#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tangle/errors.hpp"

namespace tangle {

/// Dense transaction id in insertion order; genesis is 0.
enum class TxId : std::uint32_t {};

constexpr std::size_t index(TxId id) { return static_cast<std::size_t>(id); }
constexpr TxId tx_id(std::size_t i) { return static_cast<TxId>(i); }

inline constexpr TxId kGenesis = TxId{0};

using ConflictSetId = std::uint32_t;

enum class Issuer : std::uint8_t { Honest, Adversary };

/// Never visible until explicitly published.
inline constexpr double kWithheld = std::numeric_limits<double>::infinity();

struct TxMeta {
  double issue_time = 0.0;
  double visible_time = 0.0;
  Issuer issuer = Issuer::Honest;
  std::optional<ConflictSetId> conflict_set;
};

struct Transaction {
  TxId id{};
  /// Multiset: two entries (three with a G-IOTA third tip); may repeat.
  std::vector<TxId> parents;
  double issue_time = 0.0;
  double visible_time = 0.0;
  Issuer issuer = Issuer::Honest;
  std::optional<ConflictSetId> conflict_set;

  static constexpr std::int64_t own_weight() { return 1; }
};

/// Insertion-ordered set with O(1) insert, erase, membership and indexing.
class TipSet {
 public:
  bool contains(TxId id) const {
    return index(id) < pos_.size() && pos_[index(id)] >= 0;
  }
  void insert(TxId id);
  void erase(TxId id);
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  TxId operator[](std::size_t i) const { return items_[i]; }
  std::span<const TxId> items() const { return items_; }

 private:
  std::vector<TxId> items_;
  std::vector<std::int64_t> pos_;
};

/// Which member of each conflict set lies in a transaction's (inclusive)
/// past cone. Sorted by set id; usually empty.
using ConflictSummary = std::vector<std::pair<ConflictSetId, TxId>>;

class ConflictRegistry {
 public:
  ConflictSetId open_set() {
    sets_.emplace(next_, std::vector<TxId>{});
    return next_++;
  }
  void add(ConflictSetId set, TxId member) { sets_[set].push_back(member); }
  bool has_set(ConflictSetId set) const { return sets_.contains(set); }
  std::span<const TxId> members(ConflictSetId set) const;
  const std::map<ConflictSetId, std::vector<TxId>>& sets() const { return sets_; }

 private:
  std::map<ConflictSetId, std::vector<TxId>> sets_;
  ConflictSetId next_ = 0;
};

/// Append-only DAG of transactions with exact cumulative weights.
///
/// Every attach walks the new transaction's past cone once and bumps the
/// cumulative weight of each distinct ancestor, so `cumulative_weight` is a
/// lookup. Single writer; const members are safe to call concurrently.
class TangleState {
 public:
  /// Fresh tangle holding only the genesis transaction.
  TangleState();

  std::size_t size() const { return txs_.size(); }
  bool contains(TxId id) const { return index(id) < txs_.size(); }
  const Transaction& tx(TxId id) const;
  std::span<const Transaction> transactions() const { return txs_; }

  /// Distinct direct approvers, in insertion order.
  std::span<const TxId> children(TxId id) const;
  std::int64_t cumulative_weight(TxId id) const;
  const TipSet& tips() const { return tips_; }
  std::size_t approved_count() const { return size() - tips_.size(); }

  /// Appends a transaction approving `parents` (a multiset).
  /// Throws UnknownParent or ConflictViolation; the tangle is unchanged then.
  TxId attach(std::span<const TxId> parents, const TxMeta& meta);

  /// True when attaching `parents` (plus an optional own conflict tag) would
  /// not put two members of one conflict set in a single past cone.
  bool compatible(std::span<const TxId> parents,
                  std::optional<ConflictSetId> own = std::nullopt,
                  TxId own_id = TxId{0}) const;

  /// Member of `set` in the inclusive past cone of `id`, if any.
  std::optional<TxId> conflict_member(TxId id, ConflictSetId set) const;
  const ConflictSummary& conflict_summary(TxId id) const { return summary_[index(id)]; }

  /// Opens a new conflict set whose first member is an existing transaction.
  /// The membership is propagated to that transaction's future cone.
  ConflictSetId open_conflict_set(TxId member);
  /// Opens an empty conflict set for a transaction that is about to attach.
  ConflictSetId open_conflict_set() { return conflicts_.open_set(); }
  const ConflictRegistry& conflicts() const { return conflicts_; }

  /// Lowers the visible time of a withheld transaction (publication).
  void publish(TxId id, double visible_time);

  /// True if `target` is `of` or one of its ancestors.
  bool in_past_cone(TxId of, TxId target) const;

  /// Length of the longest parent path to genesis.
  std::size_t height(TxId id) const;
  /// Length of the longest child path to some tip.
  std::size_t depth(TxId id) const;

 private:
  std::vector<Transaction> txs_;
  std::vector<std::vector<TxId>> children_;
  std::vector<std::int64_t> weight_;
  std::vector<ConflictSummary> summary_;
  TipSet tips_;
  ConflictRegistry conflicts_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
};

/// Merges summaries; returns nullopt on a clash inside one conflict set.
std::optional<ConflictSummary> merge_summaries(const ConflictSummary& a, const ConflictSummary& b);

}  // namespace tangle
