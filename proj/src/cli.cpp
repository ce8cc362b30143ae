#include "focinet/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"
#include "focinet/graph.hpp"
#include "focinet/hocc.hpp"
#include "focinet/household.hpp"
#include "focinet/layers.hpp"
#include "focinet/metrics.hpp"
#include "focinet/parallel.hpp"
#include "focinet/paths.hpp"
#include "focinet/pipeline.hpp"
#include "focinet/registry.hpp"
#include "focinet/synth.hpp"
#include "focinet/weights.hpp"

namespace fs = std::filesystem;

namespace focinet {

std::pair<int, int> parse_years(const std::string& text) {
  auto to_year = [&](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw UsageError("bad year range '" + text + "'");
    return v;
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int y = to_year(text);
    return {y, y};
  }
  int a = to_year(std::string_view(text).substr(0, dots));
  int b = to_year(std::string_view(text).substr(dots + 2));
  if (b < a) throw UsageError("year range '" + text + "' is reversed");
  return {a, b};
}

Staging::Staging(const fs::path& target) {
  target_ = fs::absolute(target).lexically_normal();
  if (!target_.has_filename()) target_ = target_.parent_path();
  if (fs::exists(target_) && !fs::is_directory(target_)) throw UsageError(target_.string() + " is not a directory");
  staging_ = target_.parent_path() / ("." + target_.filename().string() + ".tmp-" + std::to_string(::getpid()));
  fs::remove_all(staging_);
  fs::create_directories(staging_);
}

Staging::~Staging() {
  std::error_code ec;
  if (!committed_) fs::remove_all(staging_, ec);
}

std::vector<std::string> Staging::commit() {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(staging_)) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  if (!fs::exists(target_)) {
    fs::rename(staging_, target_);
  } else {
    for (const auto& n : names) fs::rename(staging_ / n, target_ / n);
    fs::remove_all(staging_);
  }
  committed_ = true;
  return names;
}

namespace {

struct RunInfo {
  std::string command_line;
  std::string config_text;
  std::vector<std::string> inputs;
  std::vector<std::uint64_t> seeds;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void append_manifest(const RunInfo& info, const fs::path& dir, const std::vector<std::string>& outputs) {
  std::ofstream m(dir / "manifest.txt", std::ios::app | std::ios::binary);
  if (!m) throw DataError("cannot append to manifest in " + dir.string());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - info.start).count();
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(info.config_text + '\n' + info.command_line);
  m << "[run]\n";
  m << "command=" << info.command_line << '\n';
  m << "config_hash=" << hash.str() << '\n';
  m << "seeds=";
  for (std::size_t i = 0; i < info.seeds.size(); ++i) m << (i ? "," : "") << info.seeds[i];
  m << '\n';
  m << "inputs=";
  for (std::size_t i = 0; i < info.inputs.size(); ++i) m << (i ? "," : "") << info.inputs[i];
  m << '\n';
  m << "outputs=";
  for (std::size_t i = 0; i < outputs.size(); ++i) m << (i ? "," : "") << outputs[i];
  m << '\n';
  m << "version=" << kVersion << '\n';
  m << "wall_clock_s=" << format_double(seconds) << "\n\n";
}

/// Stages the outputs of one command and records them in the manifest.
template <typename Fn>
void produce(RunInfo& info, const fs::path& target_dir, Fn&& write) {
  Staging staging(target_dir);
  write(staging.dir());
  auto names = staging.commit();
  std::erase(names, std::string("manifest.txt"));
  append_manifest(info, staging.target(), names);
}

/// Single output file `file`, written under its own name.
template <typename Fn>
void produce_file(RunInfo& info, const fs::path& file, Fn&& write) {
  const fs::path abs = fs::absolute(file).lexically_normal();
  if (!abs.has_filename()) throw UsageError("output path " + file.string() + " names a directory");
  produce(info, abs.parent_path(), [&](const fs::path& dir) { write(dir / abs.filename()); });
}

WeightParams weights_from(const std::string& file, RunInfo& info) {
  if (file.empty()) return WeightParams{};
  info.inputs.push_back(file);
  info.config_text += read_text(file);
  return load_weight_params(file);
}

Layer layer_from(const std::string& name) {
  auto l = parse_layer(name);
  if (!l) throw UsageError("unknown layer '" + name + "'");
  return *l;
}

ViewKind view_from(const std::string& name) {
  if (name == "bipartite") return ViewKind::bipartite;
  if (name == "unipartite") return ViewKind::unipartite;
  throw UsageError("unknown view '" + name + "'");
}

Graph load_graph(const std::string& file, RunInfo& info) {
  info.inputs.push_back(file);
  return read_snapshot(file);
}

void write_graph(const Graph& g, const fs::path& snapshot, const std::string& csv, RunInfo& info) {
  if (csv.empty()) {
    produce_file(info, snapshot, [&](const fs::path& f) { write_snapshot(g, f); });
    return;
  }
  const fs::path snap_abs = fs::absolute(snapshot).lexically_normal();
  const fs::path csv_abs = fs::absolute(csv).lexically_normal();
  if (snap_abs.parent_path() != csv_abs.parent_path()) throw UsageError("--csv must sit next to the snapshot");
  produce(info, snap_abs.parent_path(), [&](const fs::path& dir) {
    write_snapshot(g, dir / snap_abs.filename());
    write_edges_csv(g, dir / csv_abs.filename());
  });
}

Graph variant_graph(const Graph& g, const WeightParams& base, const std::string& variant) {
  if (variant == "unweighted_unipartite") {
    return unit_weights(g.kind() == ViewKind::bipartite ? project(g) : g);
  }
  if (g.kind() != ViewKind::bipartite) {
    if (variant == "base" || variant == "unweighted") return unit_weights(g);
    throw UsageError("variant '" + variant + "' needs a bipartite view");
  }
  WeightParams p = base;
  if (variant == "base") return apply_weights(g, p);
  if (variant == "unweighted_bipartite") {
    p.unweighted = true;
    return apply_weights(g, p);
  }
  if (variant == "uniform_container") {
    p.uniform_container = 0.5;
    return apply_weights(g, p);
  }
  if (variant.rfind("factor_", 0) == 0) {
    auto rest = variant.substr(7);
    auto cut = rest.rfind('_');
    if (cut == std::string::npos) throw UsageError("variant '" + variant + "' should read factor_<layer>_<value>");
    Layer l = layer_from(rest.substr(0, cut));
    double f = 0;
    const std::string num = rest.substr(cut + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), f);
    if (ec != std::errc() || ptr != num.data() + num.size() || !(f > 0)) {
      throw UsageError("bad factor in variant '" + variant + "'");
    }
    p.layer_factor[static_cast<std::size_t>(l)] *= f;
    return apply_weights(g, p);
  }
  throw UsageError("unknown variant '" + variant + "'");
}

std::string join_argv(int argc, const char* const* argv) {
  std::string s = "focinet";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilayer affiliation network construction and analysis", "focinet"};
  app.set_version_flag("--version", kVersion);
  std::size_t threads_flag = 0;
  app.add_option("--threads", threads_flag, "Worker threads; 0 uses all cores")->envname("FOCINET_THREADS");

  RunInfo info;
  info.command_line = join_argv(argc, argv);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic registry");
  std::string synth_config, synth_out;
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::size_t> synth_persons;
  std::string synth_years;
  synth->add_option("--config", synth_config, "INI configuration")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Overrides [rng] seed");
  synth->add_option("--persons", synth_persons, "Overrides [population] n_persons");
  synth->add_option("--years", synth_years, "Overrides the year range, A..B");

  // households
  auto* households = app.add_subcommand("households", "Assign persons to households");
  std::string hh_registry, hh_years, hh_out;
  bool lax = false;
  households->add_option("--registry", hh_registry, "Registry directory")->required();
  households->add_option("--years", hh_years, "Year range A..B; the registry span by default");
  households->add_option("--out", hh_out, "Output CSV")->required();
  households->add_flag("--lax", lax, "Ignore unknown registry columns");

  // build
  auto* build = app.add_subcommand("build", "Build yearly layer slices");
  std::string b_registry, b_households, b_years, b_layers = "all", b_out;
  std::uint64_t b_seed = 1;
  std::size_t b_cap = 100;
  bool b_no_cap = false;
  NeighborhoodParams b_nb;
  build->add_option("--registry", b_registry, "Registry directory")->required();
  build->add_option("--households", b_households, "households CSV")->required();
  build->add_option("--years", b_years, "Year range A..B; all household years by default");
  build->add_option("--layers", b_layers, "Comma separated layers or 'all'");
  build->add_option("--seed", b_seed, "Seed for neighbor ties and colleague sampling");
  build->add_option("--cap", b_cap, "Colleague sample size");
  build->add_flag("--no-cap", b_no_cap, "Full colleague cliques");
  build->add_option("--neighbors", b_nb.max_neighbors, "Neighbors per household");
  build->add_option("--radius", b_nb.radius_m, "Neighbor radius in meters");
  build->add_option("--out", b_out, "Output directory")->required();
  build->add_flag("--lax", lax, "Ignore unknown registry columns");

  // merge
  auto* merge = app.add_subcommand("merge", "Merge yearly slices of one layer over a time span");
  std::string m_in, m_layer, m_view = "bipartite", m_out, m_csv;
  int m_anchor = 0, m_span = 0;
  merge->add_option("--in", m_in, "Slice directory")->required();
  merge->add_option("--layer", m_layer, "Layer")->required();
  merge->add_option("--anchor", m_anchor, "Most recent year")->required();
  merge->add_option("--span", m_span, "Years before the anchor")->check(CLI::NonNegativeNumber);
  merge->add_option("--view", m_view, "bipartite or unipartite");
  merge->add_option("--out", m_out, "Snapshot file")->required();
  merge->add_option("--csv", m_csv, "Also export an edge CSV");

  // stack
  auto* stack = app.add_subcommand("stack", "Stack per-layer snapshots");
  std::vector<std::string> s_in;
  std::string s_out, s_csv;
  stack->add_option("--in", s_in, "Snapshots")->required()->expected(1, -1);
  stack->add_option("--out", s_out, "Snapshot file")->required();
  stack->add_option("--csv", s_csv, "Also export an edge CSV");

  // project
  auto* proj = app.add_subcommand("project", "Project a bipartite snapshot onto persons");
  std::string p_in, p_out, p_csv;
  proj->add_option("--in", p_in, "Bipartite snapshot")->required();
  proj->add_option("--out", p_out, "Snapshot file")->required();
  proj->add_option("--csv", p_csv, "Also export an edge CSV");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Network statistics");
  std::string mt_out;
  std::vector<std::string> mt_graphs;
  std::string mt_graph, mt_in, mt_layer, mt_years, mt_ref, mt_cmp, mt_registry, mt_by = "income", mt_layers = "all";
  int mt_anchor = 0, mt_span = 0, mt_year = 0, mt_quantiles = 4, mt_bins = 10;

  auto* m_counts = metrics->add_subcommand("counts", "Edge and node counts of snapshots");
  m_counts->add_option("--graph", mt_graphs, "Snapshots")->required()->expected(1, -1);
  m_counts->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_stab = metrics->add_subcommand("stability", "Year-over-year edge stability");
  m_stab->add_option("--in", mt_in, "Slice directory")->required();
  m_stab->add_option("--layer", mt_layer, "Layer")->required();
  m_stab->add_option("--years", mt_years, "Year range A..B")->required();
  m_stab->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_overlap = metrics->add_subcommand("overlap", "Edge overlap share for spans 0..S");
  m_overlap->add_option("--in", mt_in, "Slice directory")->required();
  m_overlap->add_option("--reference", mt_ref, "Reference layer")->required();
  m_overlap->add_option("--comparison", mt_cmp, "Comparison layer")->required();
  m_overlap->add_option("--anchor", mt_anchor, "Anchor year")->required();
  m_overlap->add_option("--span", mt_span, "Largest span")->check(CLI::NonNegativeNumber);
  m_overlap->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_deg = metrics->add_subcommand("degrees", "Person degree histogram");
  m_deg->add_option("--graph", mt_graph, "Snapshot")->required();
  m_deg->add_option("--layers", mt_layers, "Layers counted");
  m_deg->add_option("--bins", mt_bins, "Bins per decade")->check(CLI::PositiveNumber);
  m_deg->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_lorenz = metrics->add_subcommand("lorenz", "Lorenz curve of person degree");
  m_lorenz->add_option("--graph", mt_graph, "Snapshot")->required();
  m_lorenz->add_option("--layers", mt_layers, "Layers counted");
  m_lorenz->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_corr = metrics->add_subcommand("correlation", "Degree correlation between snapshots");
  m_corr->add_option("--graph", mt_graphs, "Snapshots")->required()->expected(1, -1);
  m_corr->add_option("--out", mt_out, "Output CSV")->required();

  auto* m_attr = metrics->add_subcommand("attribute", "Mean degree by age and income quantile or sex");
  m_attr->add_option("--graph", mt_graph, "Snapshot")->required();
  m_attr->add_option("--registry", mt_registry, "Registry directory")->required();
  m_attr->add_option("--year", mt_year, "Reference year")->required();
  m_attr->add_option("--by", mt_by, "income or sex");
  m_attr->add_option("--quantiles", mt_quantiles, "Income quantiles")->check(CLI::PositiveNumber);
  m_attr->add_option("--out", mt_out, "Output CSV")->required();
  m_attr->add_flag("--lax", lax, "Ignore unknown registry columns");

  // hocc
  auto* hocc = app.add_subcommand("hocc", "Higher-order clustering of sampled persons");
  std::string h_graph, h_out, h_hist;
  int h_order = 2;
  std::size_t h_sample = 1000;
  std::uint64_t h_seed = 1;
  hocc->add_option("--graph", h_graph, "Bipartite snapshot")->required();
  hocc->add_option("--order", h_order, "Clique order")->check(CLI::Range(2, 6));
  hocc->add_option("--sample", h_sample, "Persons sampled");
  hocc->add_option("--seed", h_seed, "Sampling seed");
  hocc->add_option("--out", h_out, "Output CSV")->required();
  hocc->add_option("--histogram", h_hist, "Also write the coefficient histogram");

  // paths
  auto* paths = app.add_subcommand("paths", "Sampled shortest-path distances");
  std::string pa_graph, pa_weights, pa_variant = "base", pa_out, pa_uni;
  PathSampleSpec pa_spec;
  paths->add_option("--graph", pa_graph, "Snapshot, bipartite for weighted variants")->required();
  paths->add_option("--sources", pa_spec.n_sources, "Sampled sources");
  paths->add_option("--targets", pa_spec.n_targets, "Sampled targets");
  paths->add_option("--seed", pa_spec.seed, "Sampling seed");
  paths->add_option("--weights", pa_weights, "Weight configuration")->check(CLI::ExistingFile);
  paths->add_option("--variant", pa_variant,
                    "base, unweighted_bipartite, uniform_container, unweighted_unipartite, factor_<layer>_<f> or sweep");
  paths->add_option("--unipartite", pa_uni, "Unipartite snapshot for the sweep");
  paths->add_option("--out", pa_out, "Output directory")->required();

  // reproduce-all
  auto* repro = app.add_subcommand("reproduce-all", "Full analysis suite on a synthetic registry");
  ReproduceOptions r;
  std::string r_config, r_weights, r_years, r_out;
  std::optional<std::size_t> r_persons;
  repro->add_option("--seed", r.seed, "Seed for every random stream");
  repro->add_option("--out", r_out, "Output directory")->required();
  repro->add_option("--config", r_config, "Synthetic population configuration")->check(CLI::ExistingFile);
  repro->add_option("--persons", r_persons, "Initial population (default 100000)");
  repro->add_option("--years", r_years, "Year range A..B");
  repro->add_option("--weights", r_weights, "Weight configuration")->check(CLI::ExistingFile);
  repro->add_option("--sources", r.path_sources, "Path sources");
  repro->add_option("--targets", r.path_targets, "Path targets");
  repro->add_option("--hocc-sample", r.hocc_sample, "Persons sampled per clustering order");
  repro->add_option("--cap", r.colleague_cap, "Colleague sample size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (app.get_subcommands().empty() || (*metrics && metrics->get_subcommands().empty())) {
    err << (*metrics ? metrics->help() : app.help());
    return 2;
  }

  try {
    const std::size_t threads = resolve_threads(threads_flag);

    if (*synth) {
      SynthConfig cfg;
      if (!synth_config.empty()) {
        cfg = load_synth_config(synth_config);
        info.inputs.push_back(synth_config);
        info.config_text = read_text(synth_config);
      }
      if (synth_seed) cfg.seed = *synth_seed;
      if (synth_persons) cfg.resize(*synth_persons);
      if (!synth_years.empty()) std::tie(cfg.start_year, cfg.end_year) = parse_years(synth_years);
      cfg.check();
      info.seeds.push_back(cfg.seed);
      auto bundle = generate(cfg);
      produce(info, synth_out, [&](const fs::path& dir) { write_registry(bundle, dir); });
    } else if (*households) {
      info.inputs.push_back(hh_registry);
      auto bundle = load_registry(hh_registry, lax);
      RegistryIndex index(bundle);
      auto [a, b] = hh_years.empty() ? std::pair{bundle.start_year, bundle.end_year} : parse_years(hh_years);
      if (a < bundle.start_year || b > bundle.end_year) throw UsageError("years outside the registry span");
      auto years = assign_household_years(index, a, b);
      produce_file(info, hh_out, [&](const fs::path& f) { write_households(years, f); });
    } else if (*build) {
      info.inputs = {b_registry, b_households};
      info.seeds.push_back(b_seed);
      auto bundle = load_registry(b_registry, lax);
      RegistryIndex index(bundle);
      auto all_years = read_households(b_households);
      std::vector<HouseholdAssignment> years;
      if (b_years.empty()) {
        years = std::move(all_years);
      } else {
        auto [a, b] = parse_years(b_years);
        for (int y = a; y <= b; ++y) {
          auto it = std::find_if(all_years.begin(), all_years.end(), [&](const auto& h) { return h.year == y; });
          if (it == all_years.end()) throw DataError("households file has no rows for " + std::to_string(y));
          years.push_back(std::move(*it));
        }
      }
      for (const auto& h : years) {
        if (h.year < bundle.start_year || h.year > bundle.end_year) {
          throw DataError("household year " + std::to_string(h.year) + " outside the registry span");
        }
      }
      BuildOptions opts;
      opts.seed = b_seed;
      opts.colleague_cap = b_no_cap ? kNoColleagueCap : b_cap;
      opts.neighborhood = b_nb;
      const LayerMask layers = parse_layer_list(b_layers);
      auto slices = build_layers(index, years, layers, opts, threads);
      std::vector<FamilyTie> ties;
      if (has_layer(layers, Layer::family)) ties = family_ties(index);
      produce(info, b_out, [&](const fs::path& dir) {
        for (const auto& s : slices) {
          if (s.layer == Layer::family) {
            auto relations = family_ties_in_year(index, ties, s.year);
            write_slice(s, dir, &relations);
          } else {
            write_slice(s, dir);
          }
        }
      });
    } else if (*merge) {
      info.inputs.push_back(m_in);
      const Layer layer = layer_from(m_layer);
      const ViewKind kind = view_from(m_view);
      std::map<int, Graph> yearly;
      for (int y = m_anchor - m_span; y <= m_anchor; ++y) {
        auto slice = read_slice(m_in, layer, y);
        yearly.emplace(y, kind == ViewKind::bipartite ? bipartite_view(slice) : unipartite_view(slice));
      }
      auto g = merge_timespan(yearly, TimeSpan{m_anchor, m_span});
      write_graph(g, m_out, m_csv, info);
    } else if (*stack) {
      std::vector<Graph> graphs;
      for (const auto& f : s_in) graphs.push_back(load_graph(f, info));
      std::vector<const Graph*> parts;
      for (const auto& g : graphs) parts.push_back(&g);
      write_graph(stack_layers(parts), s_out, s_csv, info);
    } else if (*proj) {
      auto g = load_graph(p_in, info);
      if (g.kind() != ViewKind::bipartite) throw UsageError("project needs a bipartite snapshot");
      auto u = project(g);
      u.set_span(g.span());
      write_graph(u, p_out, p_csv, info);
    } else if (*metrics) {
      MetricTable table;
      if (*m_counts) {
        std::vector<Graph> graphs;
        for (const auto& f : mt_graphs) graphs.push_back(load_graph(f, info));
        std::vector<CountEntry> entries;
        for (const auto& g : graphs) {
          TimeSpan span = g.span().value_or(TimeSpan{});
          entries.push_back({mask_to_string(g.layers()), span.anchor_year, span.span, &g});
        }
        table = edge_node_counts(entries);
      } else if (*m_stab) {
        info.inputs.push_back(mt_in);
        const Layer layer = layer_from(mt_layer);
        auto [a, b] = parse_years(mt_years);
        table = MetricTable("stability", {"layer", "year", "next_year", "stability"});
        LayerSlice prev = read_slice(mt_in, layer, a);
        for (int y = a; y < b; ++y) {
          LayerSlice next = read_slice(mt_in, layer, y + 1);
          table.add_row({std::string(layer_name(layer)), y, y + 1, cell(edge_stability(prev.edges, next.edges))});
          prev = std::move(next);
        }
      } else if (*m_overlap) {
        info.inputs.push_back(mt_in);
        const Layer ref_layer = layer_from(mt_ref);
        const Layer cmp_layer = layer_from(mt_cmp);
        const auto ref = read_slice(mt_in, ref_layer, mt_anchor).edges;
        std::vector<PersonPair> cmp;
        table = MetricTable("overlap", {"reference", "comparison", "anchor_year", "span", "share"});
        for (int s = 0; s <= mt_span; ++s) {
          const auto add = read_slice(mt_in, cmp_layer, mt_anchor - s).edges;
          std::vector<PersonPair> merged;
          std::set_union(cmp.begin(), cmp.end(), add.begin(), add.end(), std::back_inserter(merged));
          cmp.swap(merged);
          table.add_row({std::string(layer_name(ref_layer)), std::string(layer_name(cmp_layer)), mt_anchor, s,
                         cell(overlap_share(ref, cmp))});
        }
      } else if (*m_deg) {
        auto g = load_graph(mt_graph, info);
        auto d = person_degrees(g, parse_layer_list(mt_layers), threads);
        table = degree_histogram(d, mt_bins);
      } else if (*m_lorenz) {
        auto g = load_graph(mt_graph, info);
        auto curve = lorenz_points(person_degrees(g, parse_layer_list(mt_layers), threads));
        if (!curve) throw DataError("every person has degree 0");
        table = MetricTable("lorenz", {"x", "y"});
        for (auto [x, y] : *curve) table.add_row({x, y});
        table.provenance.emplace_back("top20_share", format_double(top_share(*curve, 0.2)));
        table.provenance.emplace_back("gini", format_double(gini(*curve)));
      } else if (*m_corr) {
        std::vector<Graph> graphs;
        for (const auto& f : mt_graphs) graphs.push_back(load_graph(f, info));
        std::vector<const Graph*> parts;
        for (const auto& g : graphs) parts.push_back(&g);
        auto r = degree_correlation(parts);
        table = MetricTable("degree_correlation", {"a", "b", "pearson"});
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
          for (Eigen::Index j = 0; j < r.cols(); ++j) {
            table.add_row({fs::path(mt_graphs[static_cast<std::size_t>(i)]).stem().string(),
                           fs::path(mt_graphs[static_cast<std::size_t>(j)]).stem().string(), r(i, j)});
          }
        }
      } else if (*m_attr) {
        auto g = load_graph(mt_graph, info);
        info.inputs.push_back(mt_registry);
        auto bundle = load_registry(mt_registry, lax);
        RegistryIndex index(bundle);
        AttributeGrouping grouping;
        if (mt_by == "income") {
          grouping.kind = AttributeGrouping::Kind::income_quantile;
        } else if (mt_by == "sex") {
          grouping.kind = AttributeGrouping::Kind::sex;
        } else {
          throw UsageError("--by takes income or sex, not '" + mt_by + "'");
        }
        grouping.quantiles = mt_quantiles;
        table = degree_by_attribute(g, index, mt_year, grouping, threads);
      }
      produce_file(info, mt_out, [&](const fs::path& f) { table.write(f); });
    } else if (*hocc) {
      auto g = load_graph(h_graph, info);
      if (g.kind() != ViewKind::bipartite) throw UsageError("hocc needs a bipartite snapshot");
      info.seeds.push_back(h_seed);
      auto summary = hocc_distribution(g, h_order, h_sample, h_seed, threads);
      MetricTable t("hocc", {"node", "order", "k_l", "k_l1", "coefficient"});
      for (const auto& n : summary.nodes) {
        t.add_row({static_cast<std::int64_t>(n.person), n.order, to_string(n.k_l), to_string(n.k_l1),
                   cell(n.coefficient)});
      }
      t.provenance = {{"seed", std::to_string(h_seed)},
                      {"defined", std::to_string(summary.defined)},
                      {"share_above_095", summary.share_above_095 ? format_double(*summary.share_above_095) : "NA"},
                      {"mean", summary.mean ? format_double(*summary.mean) : "NA"}};
      if (h_hist.empty()) {
        produce_file(info, h_out, [&](const fs::path& f) { t.write(f); });
      } else {
        const fs::path out_abs = fs::absolute(h_out).lexically_normal();
        const fs::path hist_abs = fs::absolute(h_hist).lexically_normal();
        if (out_abs.parent_path() != hist_abs.parent_path()) throw UsageError("--histogram must sit next to --out");
        produce(info, out_abs.parent_path(), [&](const fs::path& dir) {
          t.write(dir / out_abs.filename());
          summary.histogram.write(dir / hist_abs.filename());
        });
      }
    } else if (*paths) {
      auto g = load_graph(pa_graph, info);
      WeightParams w = weights_from(pa_weights, info);
      info.seeds.push_back(pa_spec.seed);
      if (pa_variant == "sweep") {
        if (g.kind() != ViewKind::bipartite) throw UsageError("the sweep needs a bipartite snapshot");
        std::optional<Graph> uni;
        SweepOptions opts;
        if (!pa_uni.empty()) {
          uni = load_graph(pa_uni, info);
          opts.unipartite = &*uni;
        }
        auto t = robustness_sweep(g, pa_spec, w, opts, threads);
        produce(info, pa_out, [&](const fs::path& dir) { t.write(dir / "sweep.csv"); });
      } else {
        auto endpoints = sample_endpoints(g, pa_spec);
        auto weighted = variant_graph(g, w, pa_variant);
        auto d = shortest_distances(weighted, endpoints.sources, endpoints.targets, threads);
        produce(info, pa_out, [&](const fs::path& dir) {
          distance_table(d).write(dir / "distances.csv");
          distance_histogram(d).write(dir / "distance_histogram.csv");
          std::ofstream s(dir / "summary.txt", std::ios::binary);
          auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
          s << "variant=" << pa_variant << '\n'
            << "n_sources=" << endpoints.sources.size() << '\n'
            << "n_targets=" << endpoints.targets.size() << '\n'
            << "seed=" << pa_spec.seed << '\n'
            << "pairs=" << d.pairs << '\n'
            << "unconnected=" << d.unconnected << '\n'
            << "unconnected_share=" << opt(d.unconnected_share) << '\n'
            << "mean=" << opt(d.mean) << '\n'
            << "sd=" << opt(d.sd) << '\n';
          if (!s) throw DataError("cannot write summary.txt");
        });
      }
    } else if (*repro) {
      if (!r_config.empty()) {
        r.synth = load_synth_config(r_config);
        info.inputs.push_back(r_config);
        info.config_text = read_text(r_config);
      }
      if (r_persons) {
        r.synth.resize(*r_persons);
      } else if (r_config.empty()) {
        r.synth.resize(100000);
      }
      if (!r_years.empty()) std::tie(r.synth.start_year, r.synth.end_year) = parse_years(r_years);
      r.weights = weights_from(r_weights, info);
      r.threads = threads;
      info.seeds.push_back(r.seed);
      produce(info, r_out, [&](const fs::path& dir) { reproduce_all(r, dir); });
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace focinet
