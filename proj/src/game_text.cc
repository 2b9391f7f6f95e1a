// Copyright 2026 The cfrmat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "cfrmat/game.h"

namespace cfrmat {
namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

struct NodeRecord {
  int line = 0;
  std::int64_t id = 0;
  std::optional<std::int64_t> parent;
  NodeKind kind = NodeKind::kTerminal;
  std::optional<PlayerId> player;
  std::optional<std::string> infoset;
  std::optional<std::string> action;
  std::optional<double> prob;
  std::optional<std::vector<double>> payoffs;
  int kind_column = 0;
  int parent_column = 0;
};

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    tokens.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view s) {
  T value{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string FormatDouble(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens)
      : line_(line), tokens_(std::move(tokens)) {}

  [[noreturn]] void Fail(int column, const std::string& message) const {
    throw GameTextError(line_, column, message);
  }

  // Splits `key=value`; returns the value view.
  std::pair<std::string_view, std::string_view> KeyValue(const Token& t) const {
    const size_t eq = t.text.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == t.text.size())
      Fail(t.column, "expected key=value, got '" + std::string(t.text) + "'");
    return {t.text.substr(0, eq), t.text.substr(eq + 1)};
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  int line() const { return line_; }

 private:
  int line_;
  std::vector<Token> tokens_;
};

NodeRecord ParseNodeLine(const LineParser& p) {
  const auto& tokens = p.tokens();
  NodeRecord rec;
  rec.line = p.line();
  if (tokens.size() < 2) p.Fail(tokens[0].column, "node record needs an id");
  auto id = ParseNumber<std::int64_t>(tokens[1].text);
  if (!id || *id < 0) p.Fail(tokens[1].column, "node id must be a non-negative integer");
  rec.id = *id;
  bool have_parent = false;
  bool have_kind = false;
  for (size_t i = 2; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    auto [key, value] = p.KeyValue(t);
    const int vcol = t.column + static_cast<int>(key.size()) + 1;
    auto once = [&](bool already) {
      if (already) p.Fail(t.column, "duplicate field '" + std::string(key) + "'");
    };
    if (key == "parent") {
      once(have_parent);
      have_parent = true;
      rec.parent_column = vcol;
      if (value != "none") {
        auto parent = ParseNumber<std::int64_t>(value);
        if (!parent || *parent < 0) p.Fail(vcol, "parent must be 'none' or a node id");
        rec.parent = *parent;
      }
    } else if (key == "kind") {
      once(have_kind);
      have_kind = true;
      rec.kind_column = vcol;
      if (value == "C") rec.kind = NodeKind::kChance;
      else if (value == "P") rec.kind = NodeKind::kDecision;
      else if (value == "T") rec.kind = NodeKind::kTerminal;
      else p.Fail(vcol, "kind must be C, P or T");
    } else if (key == "player") {
      once(rec.player.has_value());
      auto player = ParseNumber<PlayerId>(value);
      if (!player || *player < 0) p.Fail(vcol, "player must be a non-negative integer");
      rec.player = *player;
    } else if (key == "infoset") {
      once(rec.infoset.has_value());
      rec.infoset = std::string(value);
    } else if (key == "action") {
      once(rec.action.has_value());
      rec.action = std::string(value);
    } else if (key == "prob") {
      once(rec.prob.has_value());
      auto prob = ParseNumber<double>(value);
      if (!prob || !std::isfinite(*prob)) p.Fail(vcol, "prob must be a decimal number");
      rec.prob = *prob;
    } else if (key == "payoffs") {
      once(rec.payoffs.has_value());
      std::vector<double> values;
      size_t start = 0;
      while (true) {
        const size_t comma = value.find(',', start);
        const auto piece = value.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start);
        auto x = ParseNumber<double>(piece);
        if (!x || !std::isfinite(*x))
          p.Fail(vcol + static_cast<int>(start), "payoff must be a decimal number");
        values.push_back(*x);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      rec.payoffs = std::move(values);
    } else {
      p.Fail(t.column, "unknown field '" + std::string(key) + "'");
    }
  }
  if (!have_parent) p.Fail(tokens[0].column, "node record missing parent=");
  if (!have_kind) p.Fail(tokens[0].column, "node record missing kind=");
  return rec;
}

}  // namespace

GameTextError::GameTextError(int line, int column, const std::string& message)
    : GameError("line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

GameTree ParseGameText(std::string_view text) {
  std::optional<GameBuilder> builder;
  int num_players = 0;
  std::vector<NodeRecord> records;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    LineParser p(line_no, Tokenize(line));
    const auto& tokens = p.tokens();
    if (tokens.empty()) continue;

    if (tokens[0].text == "game") {
      if (builder) p.Fail(tokens[0].column, "duplicate game header");
      if (tokens.size() != 3) p.Fail(tokens[0].column, "expected 'game <name> players=<P>'");
      auto [key, value] = p.KeyValue(tokens[2]);
      if (key != "players") p.Fail(tokens[2].column, "expected players=<P>");
      auto players = ParseNumber<int>(value);
      if (!players || *players < 1)
        p.Fail(tokens[2].column + 8, "players must be a positive integer");
      num_players = *players;
      builder.emplace(std::string(tokens[1].text), num_players);
    } else if (tokens[0].text == "node") {
      if (!builder) p.Fail(tokens[0].column, "node record before game header");
      records.push_back(ParseNodeLine(p));
    } else {
      p.Fail(tokens[0].column, "unknown record '" + std::string(tokens[0].text) + "'");
    }
  }
  if (!builder) throw GameTextError(line_no, 1, "missing game header");

  std::unordered_map<std::int64_t, size_t> by_id;
  for (size_t i = 0; i < records.size(); ++i) {
    if (!by_id.emplace(records[i].id, i).second)
      throw GameTextError(records[i].line, 1,
                          "duplicate node id " + std::to_string(records[i].id));
  }

  for (const NodeRecord& rec : records) {
    auto fail = [&](int column, const std::string& message) {
      throw GameTextError(rec.line, column, message);
    };
    const NodeRecord* parent = nullptr;
    if (rec.parent) {
      auto it = by_id.find(*rec.parent);
      if (it == by_id.end())
        fail(rec.parent_column,
             "parent id " + std::to_string(*rec.parent) + " is not defined");
      parent = &records[it->second];
      if (!rec.action) fail(1, "non-root node " + std::to_string(rec.id) + " needs action=");
    } else if (rec.action) {
      fail(1, "root node cannot have an incoming action");
    }
    const bool chance_child = parent && parent->kind == NodeKind::kChance;
    if (chance_child && !rec.prob)
      fail(1, "child of chance node " + std::to_string(parent->id) + " needs prob=");
    if (!chance_child && rec.prob)
      fail(1, "prob= is only allowed on children of chance nodes");
    if (rec.kind == NodeKind::kTerminal) {
      if (!rec.payoffs) fail(rec.kind_column, "terminal node needs payoffs=");
      if (static_cast<int>(rec.payoffs->size()) != num_players)
        fail(1, "terminal node needs " + std::to_string(num_players) + " payoffs");
      if (rec.player || rec.infoset)
        fail(1, "terminal node cannot have player= or infoset=");
    } else {
      if (rec.payoffs) fail(1, "only terminal nodes carry payoffs=");
      if (rec.kind == NodeKind::kDecision) {
        if (!rec.player || !rec.infoset)
          fail(rec.kind_column, "player node needs player= and infoset=");
        if (*rec.player < 1 || *rec.player > num_players)
          fail(1, "player must be in 1.." + std::to_string(num_players));
      } else if (rec.player && *rec.player != kChancePlayer) {
        fail(1, "chance node player must be 0");
      }
    }
  }

  // Handles follow record order, so parents are resolved by index.
  for (const NodeRecord& rec : records) {
    const int parent = rec.parent ? static_cast<int>(by_id.at(*rec.parent)) : -1;
    const int handle = builder->AddNode(parent, rec.kind, rec.action.value_or(""));
    if (rec.kind == NodeKind::kDecision)
      builder->SetInfoset(handle, *rec.player, *rec.infoset);
    else if (rec.kind == NodeKind::kChance && rec.infoset)
      builder->SetInfoset(handle, kChancePlayer, *rec.infoset);
    if (rec.prob) builder->SetChanceProbability(handle, *rec.prob);
    if (rec.payoffs) builder->SetPayoffs(handle, *rec.payoffs);
  }
  return builder->Build();
}

std::string SerializeGameText(const GameTree& tree) {
  std::string out;
  out += "game " + tree.name + " players=" + std::to_string(tree.num_players) + "\n";
  for (NodeId v = 0; v < tree.num_nodes(); ++v) {
    const Node& node = tree.node(v);
    out += "node " + std::to_string(v) + " parent=";
    out += node.parent == kNoNode ? "none" : std::to_string(node.parent);
    out += " kind=";
    out += NodeKindCode(node.kind);
    if (node.kind != NodeKind::kTerminal) {
      const Infoset& info = tree.infoset(node.infoset);
      out += " player=" + std::to_string(info.owner);
      if (!info.label.empty()) out += " infoset=" + info.label;
    }
    if (node.parent != kNoNode) {
      const Node& parent = tree.node(node.parent);
      out += " action=" +
             tree.infoset(parent.infoset).actions[static_cast<size_t>(node.incoming_action)];
      if (parent.kind == NodeKind::kChance) out += " prob=" + FormatDouble(node.chance_prob);
    }
    if (node.kind == NodeKind::kTerminal) {
      out += " payoffs=";
      for (size_t i = 0; i < node.payoffs.size(); ++i) {
        if (i > 0) out += ',';
        out += FormatDouble(node.payoffs[i]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace cfrmat
