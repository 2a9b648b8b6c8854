#include "tangle/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace tangle {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line, std::string_view what) {
  throw Error(ErrorCode::IoFailure, fmt::format("snapshot line {}: {}", line, what));
}

std::uint64_t parse_uint(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) malformed(line, fmt::format("bad integer '{}'", s));
  return v;
}

double parse_time(std::string_view s, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) malformed(line, fmt::format("bad time '{}'", s));
  return v;
}

}  // namespace

std::string export_snapshot(const TangleState& tangle) {
  std::string out(kSnapshotHeader);
  out += '\n';
  for (const Transaction& t : tangle.transactions()) {
    std::string p1 = "-";
    std::string p2 = "-";
    if (!t.parents.empty()) p1 = fmt::format("{}", index(t.parents[0]));
    if (t.parents.size() > 1) {
      p2 = fmt::format("{}", index(t.parents[1]));
      for (std::size_t k = 2; k < t.parents.size(); ++k) p2 += fmt::format(";{}", index(t.parents[k]));
    }
    out += fmt::format("{}, {}, {}, {}, {}, {}, {}\n", index(t.id), p1, p2, t.issue_time, t.visible_time,
                       t.issuer == Issuer::Honest ? "honest" : "adversary",
                       t.conflict_set ? fmt::format("{}", *t.conflict_set) : std::string("-"));
  }
  return out;
}

TangleState import_snapshot(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kSnapshotHeader) malformed(1, "missing header");

  TangleState tangle;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = split(lines[ln], ',');
    if (fields.size() != 7) malformed(ln + 1, "expected 7 fields");
    const std::uint64_t id = parse_uint(fields[0], ln + 1);
    if (id != ln - 1) malformed(ln + 1, "ids must be contiguous from 0");

    std::vector<TxId> parents;
    if (fields[1] != "-") parents.push_back(tx_id(parse_uint(fields[1], ln + 1)));
    if (fields[2] != "-") {
      for (auto p : split(fields[2], ';')) parents.push_back(tx_id(parse_uint(p, ln + 1)));
    }

    TxMeta meta;
    meta.issue_time = parse_time(fields[3], ln + 1);
    meta.visible_time = parse_time(fields[4], ln + 1);
    if (fields[5] == "honest") {
      meta.issuer = Issuer::Honest;
    } else if (fields[5] == "adversary") {
      meta.issuer = Issuer::Adversary;
    } else {
      malformed(ln + 1, "issuer must be honest or adversary");
    }
    if (fields[6] != "-") meta.conflict_set = static_cast<ConflictSetId>(parse_uint(fields[6], ln + 1));

    if (id == 0) {
      if (!parents.empty()) malformed(ln + 1, "genesis cannot have parents");
      continue;
    }
    if (parents.empty()) malformed(ln + 1, "only genesis may have no parents");
    if (meta.conflict_set) {
      while (!tangle.conflicts().has_set(*meta.conflict_set)) tangle.open_conflict_set();
    }
    try {
      tangle.attach(parents, meta);
    } catch (const Error& e) {
      malformed(ln + 1, e.what());
    }
  }
  return tangle;
}

std::string export_dot(const TangleState& tangle) {
  std::string out = "digraph tangle {\n  rankdir=RL;\n";
  for (const Transaction& t : tangle.transactions()) {
    const bool tip = tangle.tips().contains(t.id);
    out += fmt::format("  {} [label=\"{}\"{}{}];\n", index(t.id), t.id == kGenesis ? "G" : fmt::format("{}", index(t.id)),
                       tip ? ", style=filled, fillcolor=gray" : "",
                       t.issuer == Issuer::Adversary ? ", color=red" : "");
  }
  for (const Transaction& t : tangle.transactions()) {
    for (TxId p : t.parents) out += fmt::format("  {} -> {};\n", index(t.id), index(p));
  }
  out += "}\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace tangle
