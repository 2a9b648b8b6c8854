#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tangle/tangle.hpp"

namespace tangle {

inline constexpr std::string_view kSnapshotHeader = "tangle-snapshot v1";

/// Line-oriented text form, one record per transaction:
///
///   id, parent1, parent2|-, issue_time, visible_time, issuer, conflict_set|-
///
/// Genesis writes `-` for both parents. A third parent is appended to the
/// parent2 field as `parent2;parent3`. Times use the shortest decimal that
/// round-trips; withheld transactions carry `inf`.
std::string export_snapshot(const TangleState& tangle);

/// Rebuilds a tangle by replaying the records through attach.
/// Throws IoFailure on malformed input.
TangleState import_snapshot(std::string_view text);

/// Graphviz digraph with one edge from each transaction to each parent slot.
std::string export_dot(const TangleState& tangle);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tangle
