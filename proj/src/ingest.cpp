#include "wrec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "wrec/errors.hpp"

namespace wrec {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool looks_like_header(const std::vector<std::string_view>& fields) {
  if (fields.size() < 2) return false;
  const std::string user = lower(fields[0]);
  const std::string item = lower(fields[1]);
  return user.starts_with("user") && (item.starts_with("item") || item.starts_with("movie"));
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

/// Unbiased draw from [0, bound) using rejection on the raw 64-bit output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

std::size_t fraction_of(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_heldout(std::ostream& out, const HeldOutSet& h) {
  write_triplets(out, h.foldin);
  write_triplets(out, h.foldin.n_items(), h.targets);
}

}  // namespace

void SplitSpec::validate() const {
  auto inside = [](double f) { return f > 0.0 && f < 1.0; };
  if (!inside(heldout_user_fraction)) {
    throw ConfigError("heldout_user_fraction must lie in (0, 1)");
  }
  if (!inside(foldin_fraction)) throw ConfigError("foldin_fraction must lie in (0, 1)");
  if (2.0 * heldout_user_fraction >= 1.0) {
    throw ConfigError("2 * heldout_user_fraction must be < 1 to leave training users");
  }
}

std::vector<RawInteraction> parse_interactions(const std::string& text, InputFormat format) {
  const char delim = format == InputFormat::csv ? ',' : '\t';
  std::vector<RawInteraction> records;
  std::size_t expected_columns = 0;
  bool first_content_line = true;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line, delim);
    if (first_content_line) {
      first_content_line = false;
      if (looks_like_header(fields)) continue;
    }
    if (fields.size() < 2 || fields.size() > 4) {
      throw ParseError(line_no, "expected 2 to 4 columns, got " + std::to_string(fields.size()));
    }
    if (expected_columns == 0) expected_columns = fields.size();
    if (fields.size() != expected_columns) {
      throw ParseError(line_no, "expected " + std::to_string(expected_columns) +
                                    " columns, got " + std::to_string(fields.size()));
    }

    RawInteraction r;
    r.user_id = std::string(fields[0]);
    r.item_id = std::string(fields[1]);
    if (r.user_id.empty() || r.item_id.empty()) {
      throw ParseError(line_no, "user and item ids must be non-empty");
    }
    if (fields.size() >= 3) {
      double rating = 0.0;
      if (!parse_number(fields[2], rating) || !std::isfinite(rating)) {
        throw ParseError(line_no, "non-numeric rating '" + std::string(fields[2]) + "'");
      }
      r.rating = rating;
    }
    if (fields.size() == 4) {
      std::int64_t ts = 0;
      if (!parse_number(fields[3], ts)) {
        throw ParseError(line_no, "non-integer timestamp '" + std::string(fields[3]) + "'");
      }
      r.timestamp = ts;
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw EmptyDatasetError("no interaction records found");
  return records;
}

std::vector<RawInteraction> load_interactions(const std::filesystem::path& path,
                                              InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_interactions(buffer.str(), format);
  } catch (const EmptyDatasetError&) {
    throw EmptyDatasetError(path.string() + ": no interaction records found");
  }
}

InteractionMatrix preprocess(const std::vector<RawInteraction>& raw, const SplitSpec& spec) {
  if (raw.empty()) throw EmptyDatasetError("preprocess: no records");

  // Provisional ids in order of first appearance; records without a rating
  // are not subject to the threshold.
  std::unordered_map<std::string, std::size_t> user_of, item_of;
  std::vector<const std::string*> user_names, item_names;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(raw.size());
  for (const auto& r : raw) {
    if (spec.rating_threshold && r.rating && *r.rating < *spec.rating_threshold) continue;
    auto [uit, unew] = user_of.emplace(r.user_id, user_names.size());
    if (unew) user_names.push_back(&uit->first);
    auto [iit, inew] = item_of.emplace(r.item_id, item_names.size());
    if (inew) item_names.push_back(&iit->first);
    pairs.emplace_back(uit->second, iit->second);
  }
  if (pairs.empty()) throw EmptyDatasetError("preprocess: every record was filtered out");

  std::vector<std::vector<std::size_t>> by_user(user_names.size());
  for (auto [u, i] : pairs) by_user[u].push_back(i);
  for (auto& items : by_user) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
  }

  std::vector<char> user_alive(user_names.size(), 1), item_alive(item_names.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> user_count(user_names.size(), 0), item_count(item_names.size(), 0);
    for (std::size_t u = 0; u < by_user.size(); ++u) {
      if (!user_alive[u]) continue;
      for (std::size_t i : by_user[u]) {
        if (!item_alive[i]) continue;
        ++user_count[u];
        ++item_count[i];
      }
    }
    for (std::size_t u = 0; u < user_alive.size(); ++u) {
      if (user_alive[u] && (user_count[u] == 0 || user_count[u] < spec.min_user_interactions)) {
        user_alive[u] = 0;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < item_alive.size(); ++i) {
      if (item_alive[i] && (item_count[i] == 0 || item_count[i] < spec.min_item_interactions)) {
        item_alive[i] = 0;
        changed = true;
      }
    }
  }

  // Dense indices follow first appearance among surviving pairs.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> user_index(user_names.size(), kNone), item_index(item_names.size(), kNone);
  std::vector<std::string> user_ids, item_ids;
  for (auto [u, i] : pairs) {
    if (!user_alive[u] || !item_alive[i]) continue;
    if (user_index[u] == kNone) {
      user_index[u] = user_ids.size();
      user_ids.push_back(*user_names[u]);
    }
    if (item_index[i] == kNone) {
      item_index[i] = item_ids.size();
      item_ids.push_back(*item_names[i]);
    }
  }
  if (user_ids.empty()) throw EmptyDatasetError("preprocess: min-count filters removed every record");

  std::vector<std::vector<ItemIndex>> rows(user_ids.size());
  for (std::size_t u = 0; u < by_user.size(); ++u) {
    if (user_index[u] == kNone) continue;
    auto& row = rows[user_index[u]];
    for (std::size_t i : by_user[u]) {
      if (item_index[i] != kNone) row.push_back(static_cast<ItemIndex>(item_index[i]));
    }
    std::sort(row.begin(), row.end());
  }
  const std::size_t n_items = item_ids.size();
  return InteractionMatrix(rows, n_items, std::move(user_ids), std::move(item_ids));
}

Split split_strong_generalization(const InteractionMatrix& x, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = x.n_users();
  const std::size_t n_heldout = fraction_of(n, spec.heldout_user_fraction);
  if (n_heldout == 0) {
    throw SplitError(std::to_string(n) + " users are too few for heldout_user_fraction " +
                     std::to_string(spec.heldout_user_fraction));
  }

  std::mt19937_64 rng(spec.rng_seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, rng);

  std::vector<std::size_t> validation_users(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_heldout));
  std::vector<std::size_t> test_users(perm.begin() + static_cast<std::ptrdiff_t>(n_heldout),
                                      perm.begin() + static_cast<std::ptrdiff_t>(2 * n_heldout));
  std::vector<std::size_t> train_users(perm.begin() + static_cast<std::ptrdiff_t>(2 * n_heldout), perm.end());
  for (auto* group : {&validation_users, &test_users, &train_users}) {
    std::sort(group->begin(), group->end());
  }

  // Items without a training interaction are dropped everywhere.
  std::vector<std::size_t> train_count(x.n_items(), 0);
  for (std::size_t u : train_users) {
    for (ItemIndex i : x.row(u)) ++train_count[i];
  }
  constexpr ItemIndex kDropped = std::numeric_limits<ItemIndex>::max();
  std::vector<ItemIndex> remap(x.n_items(), kDropped);
  std::vector<std::string> item_ids;
  for (std::size_t i = 0; i < x.n_items(); ++i) {
    if (train_count[i] == 0) continue;
    remap[i] = static_cast<ItemIndex>(item_ids.size());
    item_ids.push_back(x.item_id(i));
  }

  Split split;
  split.dropped_items = x.n_items() - item_ids.size();
  if (split.dropped_items > 0) {
    split.warnings.push_back(std::to_string(split.dropped_items) +
                             " items had no training interactions and were dropped");
  }

  auto remapped_row = [&](std::size_t u) {
    std::vector<ItemIndex> row;
    for (ItemIndex i : x.row(u)) {
      if (remap[i] != kDropped) row.push_back(remap[i]);
    }
    return row;
  };

  {
    std::vector<std::vector<ItemIndex>> rows;
    std::vector<std::string> ids;
    for (std::size_t u : train_users) {
      rows.push_back(remapped_row(u));
      ids.push_back(x.user_id(u));
    }
    split.train = InteractionMatrix(rows, item_ids.size(), std::move(ids), item_ids);
  }

  auto build_heldout = [&](const std::vector<std::size_t>& users, const char* name) {
    std::vector<std::vector<ItemIndex>> foldin;
    std::vector<std::vector<ItemIndex>> targets;
    std::vector<std::string> ids;
    std::size_t excluded = 0;
    for (std::size_t u : users) {
      std::vector<ItemIndex> items = remapped_row(u);
      shuffle(items, rng);
      const std::size_t n_fold = fraction_of(items.size(), spec.foldin_fraction);
      if (n_fold == 0 || n_fold == items.size()) {
        ++excluded;
        continue;
      }
      std::vector<ItemIndex> fold(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(n_fold));
      std::vector<ItemIndex> target(items.begin() + static_cast<std::ptrdiff_t>(n_fold), items.end());
      std::sort(fold.begin(), fold.end());
      std::sort(target.begin(), target.end());
      foldin.push_back(std::move(fold));
      targets.push_back(std::move(target));
      ids.push_back(x.user_id(u));
    }
    if (excluded > 0) {
      split.warnings.push_back(std::to_string(excluded) + " " + name +
                               " users excluded: too few items for a non-empty fold-in and target");
    }
    split.excluded_users += excluded;
    if (foldin.empty()) {
      throw SplitError(std::string("every ") + name + " user was excluded");
    }
    return HeldOutSet{InteractionMatrix(foldin, item_ids.size(), std::move(ids), item_ids),
                      std::move(targets)};
  };
  split.validation = build_heldout(validation_users, "validation");
  split.test = build_heldout(test_users, "test");
  return split;
}

void write_triplets(std::ostream& out, std::size_t n_items,
                    const std::vector<std::vector<ItemIndex>>& rows) {
  std::size_t nnz = 0;
  for (const auto& r : rows) nnz += r.size();
  out << rows.size() << ' ' << n_items << ' ' << nnz << '\n';
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (ItemIndex i : rows[u]) out << u << ' ' << i << '\n';
  }
}

void write_triplets(std::ostream& out, const InteractionMatrix& x) {
  out << x.n_users() << ' ' << x.n_items() << ' ' << x.nnz() << '\n';
  for (std::size_t u = 0; u < x.n_users(); ++u) {
    for (ItemIndex i : x.row(u)) out << u << ' ' << i << '\n';
  }
}

InteractionMatrix read_triplets(std::istream& in, std::vector<std::string> user_ids,
                                std::vector<std::string> item_ids) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError(line_no + 1, "unexpected end of triplet data");
    ++line_no;
    return std::istringstream(line);
  };

  std::size_t n_users = 0, n_items = 0, nnz = 0;
  {
    auto header = next_line();
    if (!(header >> n_users >> n_items >> nnz)) {
      throw ParseError(line_no, "expected header 'n_users n_items nnz'");
    }
  }
  std::vector<std::vector<ItemIndex>> rows(n_users);
  for (std::size_t k = 0; k < nnz; ++k) {
    auto fields = next_line();
    std::size_t u = 0, i = 0;
    if (!(fields >> u >> i) || u >= n_users || i >= n_items) {
      throw ParseError(line_no, "bad triplet '" + line + "'");
    }
    rows[u].push_back(static_cast<ItemIndex>(i));
  }
  for (auto& r : rows) std::sort(r.begin(), r.end());
  try {
    return InteractionMatrix(rows, n_items, std::move(user_ids), std::move(item_ids));
  } catch (const DimensionError& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_split(const std::filesystem::path& dir, const Split& split) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("train.txt");
    write_triplets(out, split.train);
  }
  {
    auto out = open("validation.txt");
    write_heldout(out, split.validation);
  }
  {
    auto out = open("test.txt");
    write_heldout(out, split.test);
  }
  write_lines(dir / "items.txt", split.train.item_ids());
  write_lines(dir / "train_users.txt", split.train.user_ids());
  write_lines(dir / "validation_users.txt", split.validation.foldin.user_ids());
  write_lines(dir / "test_users.txt", split.test.foldin.user_ids());
}

Split read_split(const std::filesystem::path& dir) {
  const auto items = read_lines(dir / "items.txt");
  auto open = [&](const char* name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / name).string());
    return in;
  };
  auto read_heldout = [&](const char* file, const char* users) {
    auto in = open(file);
    HeldOutSet h;
    h.foldin = read_triplets(in, read_lines(dir / users), items);
    InteractionMatrix targets = read_triplets(in);
    if (targets.n_users() != h.foldin.n_users() || targets.n_items() != items.size()) {
      throw ParseError(0, std::string(file) + ": target block does not match fold-in block");
    }
    for (std::size_t u = 0; u < targets.n_users(); ++u) {
      auto r = targets.row(u);
      h.targets.emplace_back(r.begin(), r.end());
    }
    return h;
  };

  Split split;
  {
    auto in = open("train.txt");
    split.train = read_triplets(in, read_lines(dir / "train_users.txt"), items);
  }
  split.validation = read_heldout("validation.txt", "validation_users.txt");
  split.test = read_heldout("test.txt", "test_users.txt");
  return split;
}

}  // namespace wrec
