// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "traitscan/error.hpp"
#include "traitscan/time.hpp"

namespace traitscan {
namespace {

using Field = std::variant<int*, double*, std::uint64_t*, std::string*, bool*>;

struct Key {
  const char* name;
  const char* help;
};

// Order here is the documented order.
constexpr Key kKeys[] = {
    {"corpus.dir", "directory holding users/tweets/likes/follows jsonl and seeds.json"},
    {"out_dir", "output directory"},
    {"rng_seed", "seed for every random choice"},
    {"workers", "intra-stage worker threads (results do not depend on it)"},
    {"cohort.l_min", "minimum likes on seed posts (0 = choose automatically)"},
    {"cohort.s_min", "minimum distinct seeds liked (0 = choose automatically)"},
    {"cohort.max_cov", "largest allowed coefficient of variation of per-seed likes"},
    {"cohort.target_size", "cohort size the automatic rule aims for"},
    {"cohort.auto_rule", "nearest | nearest_below"},
    {"cohort.auto_min_likes", "automatic rule ignores cells with fewer likes"},
    {"cohort.auto_min_sources", "automatic rule ignores cells with fewer seeds"},
    {"cohort.top_hashtags", "top cohort hashtags used to find control candidates"},
    {"control.language", "required predominant language of control users"},
    {"control.bucket", "creation bucket: quarter | month | year | <N>d"},
    {"control.allow_overflow", "fill short buckets from neighbours instead of failing"},
    {"control.size", "control group size (0 = cohort size)"},
    {"features.timeline_cap", "most recent items kept per user (0 = all)"},
    {"features.snapshot", "ISO-8601 time for age features (empty = profile snapshot)"},
    {"features.lexicons", "comma-separated lexicon files (.tsv or .dic)"},
    {"features.external", "CSV of extra per-user columns keyed by user_id"},
    {"train.n_trees", "boosting rounds"},
    {"train.max_depth", "tree depth"},
    {"train.learning_rate", "shrinkage"},
    {"train.min_samples_leaf", "rows required in each child"},
    {"train.k_folds", "cross-validation folds"},
    {"train.test_fraction", "held-out share per class"},
    {"train.l2", "leaf-weight regularizer"},
    {"train.max_bins", "candidate thresholds per feature"},
    {"curve.ks", "feature counts for the growth curve; 'all' = every feature"},
    {"importance.top_n", "rows in importance.csv (0 = all)"},
    {"topics.top_k", "hashtags kept in the co-occurrence subgraph"},
};

std::vector<std::pair<std::string, Field>> fields(RunConfig& c) {
  return {
      {"corpus.dir", &c.corpus_dir},
      {"out_dir", &c.out_dir},
      {"rng_seed", &c.rng_seed},
      {"workers", &c.workers},
      {"cohort.l_min", &c.l_min},
      {"cohort.s_min", &c.s_min},
      {"cohort.max_cov", &c.max_cov},
      {"cohort.target_size", &c.target_size},
      {"cohort.auto_rule", &c.auto_rule},
      {"cohort.auto_min_likes", &c.auto_min_likes},
      {"cohort.auto_min_sources", &c.auto_min_sources},
      {"cohort.top_hashtags", &c.top_hashtags},
      {"control.language", &c.control_language},
      {"control.bucket", &c.control_bucket},
      {"control.allow_overflow", &c.control_allow_overflow},
      {"control.size", &c.control_size},
      {"features.timeline_cap", &c.timeline_cap},
      {"features.snapshot", &c.snapshot},
      {"features.lexicons", &c.lexicons},
      {"features.external", &c.external_features},
      {"train.n_trees", &c.train.n_trees},
      {"train.max_depth", &c.train.max_depth},
      {"train.learning_rate", &c.train.learning_rate},
      {"train.min_samples_leaf", &c.train.min_samples_leaf},
      {"train.k_folds", &c.train.k_folds},
      {"train.test_fraction", &c.train.test_fraction},
      {"train.l2", &c.train.l2},
      {"train.max_bins", &c.train.max_bins},
      {"curve.ks", &c.curve_ks},
      {"importance.top_n", &c.importance_top_n},
      {"topics.top_k", &c.topics_top_k},
  };
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw Error("not a number: '" + v + "'");
  return out;
}

std::string format(const Field& f) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          const auto r = std::to_chars(buf, buf + sizeof buf, *p);
          return std::string(buf, r.ptr);
        } else {
          return std::to_string(*p);
        }
      },
      f);
}

std::string join_errors(const std::string& head, const std::vector<std::string>& errs) {
  std::string msg = head;
  for (const auto& e : errs) msg += "\n  " + e;
  return msg;
}

// Pulls the indented lines out of an aggregated Error message.
void absorb(std::vector<std::string>& errs, const std::function<void()>& fn, const std::string& prefix = "") {
  try {
    fn();
  } catch (const Error& e) {
    std::istringstream in(e.what());
    std::string line;
    bool any = false;
    while (std::getline(in, line))
      if (line.rfind("  ", 0) == 0) {
        errs.push_back(prefix + trim(line));
        any = true;
      }
    if (!any) errs.push_back(prefix + e.what());
  }
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key.rfind("synth.", 0) == 0) {
    synth::SynthSpec probe = synth::SynthSpec::defaults();
    probe.apply({{key.substr(6), value}});
    synth[key.substr(6)] = value;
    return;
  }
  auto table = fields(*this);
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
  if (it == table.end()) throw Error("unknown key '" + key + "'");
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          *p = value;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") *p = true;
          else if (value == "false" || value == "0") *p = false;
          else throw Error(key + ": expected true or false, got '" + value + "'");
        } else {
          try {
            *p = parse_number<T>(value);
          } catch (const Error&) {
            throw Error(key + ": not a valid number '" + value + "'");
          }
        }
      },
      it->second);
}

void RunConfig::apply_text(const std::string& text, const std::string& source) {
  std::vector<std::string> errs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errs.push_back(source + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    try {
      set(trim(std::string_view(body).substr(0, eq)), body.substr(eq + 1));
    } catch (const Error& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      errs.push_back(source + ":" + std::to_string(lineno) + ": " + msg);
    }
  }
  if (!errs.empty()) throw Error(join_errors("invalid configuration:", errs));
}

void RunConfig::apply_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  apply_text(ss.str(), path.string());
}

void RunConfig::validate() const {
  std::vector<std::string> errs;
  if (workers < 1) errs.push_back("workers must be >= 1");
  if (l_min < 0 || s_min < 0) errs.push_back("cohort thresholds must be >= 0");
  if ((l_min == 0 || s_min == 0) && target_size <= 0)
    errs.push_back("cohort.target_size must be > 0 when thresholds are chosen automatically");
  if (!(max_cov > 0)) errs.push_back("cohort.max_cov must be > 0");
  if (auto_rule != "nearest" && auto_rule != "nearest_below")
    errs.push_back("cohort.auto_rule must be nearest or nearest_below");
  if (top_hashtags < 1) errs.push_back("cohort.top_hashtags must be >= 1");
  if (control_size < 0) errs.push_back("control.size must be >= 0");
  absorb(errs, [&] { cohort::CreationBucket::parse(control_bucket); }, "control.bucket: ");
  if (timeline_cap < 0) errs.push_back("features.timeline_cap must be >= 0");
  if (!snapshot.empty()) absorb(errs, [&] { parse_iso8601(snapshot); }, "features.snapshot: ");
  for (const auto& p : lexicon_paths()) {
    const auto ext = p.extension().string();
    if (ext != ".tsv" && ext != ".dic") errs.push_back("lexicon " + p.string() + ": extension must be .tsv or .dic");
  }
  absorb(errs, [&] { train_config().validate(); }, "train.");
  absorb(errs, [&] { curve_sizes(1); });
  if (importance_top_n < 0) errs.push_back("importance.top_n must be >= 0");
  if (topics_top_k < 1) errs.push_back("topics.top_k must be >= 1");
  absorb(errs, [&] { synth_spec().validate(); }, "synth.");
  if (!errs.empty()) throw Error(join_errors("invalid configuration:", errs));
}

std::string RunConfig::canonical() const {
  RunConfig copy = *this;
  std::map<std::string, std::string> kv;
  for (const auto& [k, f] : fields(copy))
    if (k != "workers" && k != "out_dir" && k != "corpus.dir") kv[k] = format(f);
  for (const auto& [k, v] : synth) kv["synth." + k] = v;
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::filesystem::path> RunConfig::lexicon_paths() const {
  std::vector<std::filesystem::path> out;
  std::istringstream in(lexicons);
  std::string item;
  while (std::getline(in, item, ','))
    if (auto t = trim(item); !t.empty()) out.emplace_back(t);
  return out;
}

std::vector<std::size_t> RunConfig::curve_sizes(std::size_t n_features) const {
  std::vector<std::size_t> out;
  std::istringstream in(curve_ks);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (t.empty()) continue;
    if (t == "all") {
      out.push_back(n_features);
      continue;
    }
    std::size_t k = 0;
    try {
      k = parse_number<std::size_t>(t);
    } catch (const Error&) {
      throw Error("curve.ks: bad entry '" + t + "'");
    }
    if (k == 0) throw Error("curve.ks: entries must be >= 1");
    out.push_back(std::min(k, n_features));
  }
  if (out.empty()) throw Error("curve.ks: no entries");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

cohort::AutoThresholdOptions RunConfig::auto_options() const {
  cohort::AutoThresholdOptions o;
  o.rule = auto_rule == "nearest_below" ? cohort::AutoRule::kNearestBelow : cohort::AutoRule::kNearest;
  o.min_likes = auto_min_likes;
  o.min_sources = auto_min_sources;
  return o;
}

cohort::ControlConstraints RunConfig::control_constraints() const {
  cohort::ControlConstraints c;
  c.target_language = control_language;
  c.creation_bucket = cohort::CreationBucket::parse(control_bucket);
  c.allow_overflow = control_allow_overflow;
  return c;
}

synth::SynthSpec RunConfig::synth_spec() const {
  synth::SynthSpec s = synth::SynthSpec::defaults();
  s.rng_seed = rng_seed;
  s.apply(synth);
  return s;
}

model::TrainConfig RunConfig::train_config() const {
  model::TrainConfig t = train;
  t.rng_seed = rng_seed;
  t.workers = workers;
  return t;
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  RunConfig defaults;
  auto table = fields(defaults);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& key : kKeys) {
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key.name; });
    out.emplace_back(std::string(key.name) + " = " + format(it->second), key.help);
  }
  out.emplace_back("synth.<field> = ...", "synthetic corpus overrides, e.g. synth.conspiracy.reply_share");
  return out;
}

}  // namespace traitscan
