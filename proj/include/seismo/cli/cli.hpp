#pragma once

#include <charconv>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seismo/chunker/store.hpp"
#include "seismo/choropleth/named_scale.hpp"
#include "seismo/choropleth/svg.hpp"
#include "seismo/ingest/ingest.hpp"
#include "seismo/server/server.hpp"

// `seismo` operator commands. Exit codes: 0 success, 1 user or data error,
// 2 internal error. Data goes to `out`, progress and diagnostics to `err`.

namespace seismo::cli {

namespace fs = std::filesystem;

namespace detail {

struct SourceArgs {
  std::string format;
  std::string spec_path;
  std::string in_path;
  bool skip_bad_rows = false;
};

inline IngestSpec load_spec(const SourceArgs& a) {
  IngestSpec spec = IngestSpec::from_json(seismo::detail::read_file(a.spec_path));
  if (!a.format.empty()) spec.format = parse_source_format(a.format);
  if (a.skip_bad_rows) spec.skip_bad_rows = true;
  return spec;
}

inline std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::decode_error, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

inline void add_source_options(CLI::App& cmd, SourceArgs& a) {
  cmd.add_option("--format", a.format, "csv | json-rows | json-columnar | html-table (overrides the spec)")
      ->check(CLI::IsMember({"csv", "json-rows", "json-columnar", "html-table"}));
  cmd.add_option("--spec", a.spec_path, "Ingest spec JSON")->required();
  cmd.add_option("--in", a.in_path, "Source file")->required();
  cmd.add_flag("--skip-bad-rows", a.skip_bad_rows, "Skip and count unreadable rows instead of failing");
}

inline std::string report_text(const Dataset& d, const ValidationReport& r) {
  std::ostringstream out;
  out << "regions      " << d.regions().size() << "\n";
  out << "periods      " << d.periods().size();
  if (!d.periods().empty()) out << " (" << d.periods().first_label() << " .. " << d.periods().last_label() << ")";
  out << "\nindicators   " << d.indicators().size() << "\n";
  out << "tracks       " << d.tracks().size() << "\n";
  out << "cells        " << d.cell_count() << " (" << d.observed_count() << " observed)\n";
  out << "periods with data " << r.periods_with_data << "/" << r.period_count << "\n";
  out << "skipped rows " << r.skipped_rows << "\n";
  out << "violations   " << r.violations.size() << "\n";
  for (const auto& v : r.violations) out << "  " << v << "\n";
  return out.str();
}

inline nlohmann::ordered_json report_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["ok"] = r.ok();
  j["violations"] = r.violations;
  j["period_count"] = r.period_count;
  j["periods_with_data"] = r.periods_with_data;
  j["skipped_rows"] = r.skipped_rows;
  j["indicators"] = nlohmann::ordered_json::array();
  for (const auto& c : r.indicators)
    j["indicators"].push_back({{"id", c.id}, {"observed", c.observed}, {"total", c.total}, {"missing_ratio", c.missing_ratio()}});
  return j;
}

/// Ordinal from an integer or a calendar label of the store's axis.
inline std::size_t resolve_ordinal(const std::string& text, const PeriodAxis& axis) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (!text.empty() && ec == std::errc{} && ptr == text.data() + text.size()) {
    if (value >= axis.size())
      throw Error(Errc::period_out_of_range,
                  "ordinal " + text + " outside [0, " + std::to_string(axis.size()) + ")");
    return value;
  }
  const auto serial = try_parse_calendar(text, axis.granularity());
  if (!serial) throw Error(Errc::format_error, "'" + text + "' is neither an ordinal nor a " +
                                                   std::string(to_string(axis.granularity())) + " period");
  const auto ordinal = axis.ordinal_of(*serial);
  if (!ordinal) throw Error(Errc::period_out_of_range, text + " is outside " + axis.first_label() + " .. " + axis.last_label());
  return *ordinal;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal-spatial crisis data engine: ingest, pack, serve and render choropleth frames", "seismo"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  detail::SourceArgs ingest_args;
  std::string ingest_out;
  std::size_t budget = default_chunk_budget;
  auto* ingest_cmd = app.add_subcommand("ingest", "Load a source file and write a chunked store");
  detail::add_source_options(*ingest_cmd, ingest_args);
  ingest_cmd->add_option("--out", ingest_out, "Store directory")->required();
  ingest_cmd->add_option("--chunk-budget", budget, "Chunk soft budget in bytes");

  detail::SourceArgs validate_args;
  bool validate_json = false;
  auto* validate_cmd = app.add_subcommand("validate", "Load a source file and report on it without writing");
  detail::add_source_options(*validate_cmd, validate_args);
  validate_cmd->add_flag("--json", validate_json, "Machine-readable report");

  std::string pack_data, pack_out;
  auto* pack_cmd = app.add_subcommand("pack", "Verify a store and rewrite it canonically");
  pack_cmd->add_option("--data", pack_data, "Source store directory")->required();
  pack_cmd->add_option("--out", pack_out, "Destination store directory (may equal --data)")->required();
  pack_cmd->add_option("--chunk-budget", budget, "Chunk soft budget in bytes");

  ServerConfig serve_cfg;
  std::string serve_data, serve_map;
  auto* serve_cmd = app.add_subcommand("serve", "Serve a store over HTTP");
  serve_cmd->add_option("--data", serve_data, "Store directory")->required();
  serve_cmd->add_option("--map", serve_map, "SVG map whose element ids are region codes")->required();
  serve_cmd->add_option("--host", serve_cfg.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve_cfg.port, "Listen port (0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("--cors-origin", serve_cfg.cors_origin, "Access-Control-Allow-Origin value")->capture_default_str();
  serve_cmd->add_option("--chunk-budget", serve_cfg.chunk_budget, "Chunk soft budget in bytes");
  serve_cmd->add_option("--default-scale", serve_cfg.default_scale, "Scale used when a frame request names none")
      ->check(CLI::IsMember({"linear", "quantile"}))
      ->capture_default_str();
  serve_cmd->add_flag("--log-requests", serve_cfg.log_requests, "Log each request to standard error");

  std::string frames_data, frames_map, frames_track, frames_from, frames_to, frames_out;
  std::string frames_scale(default_scale_name);
  auto* frames_cmd = app.add_subcommand("export-frames", "Render one SVG frame per period");
  frames_cmd->add_option("--data", frames_data, "Store directory")->required();
  frames_cmd->add_option("--map", frames_map, "SVG map")->required();
  frames_cmd->add_option("--track", frames_track, "Track to color by")->required();
  frames_cmd->add_option("--from", frames_from, "First ordinal or period label")->required();
  frames_cmd->add_option("--to", frames_to, "Last ordinal or period label")->required();
  frames_cmd->add_option("--out", frames_out, "Output directory")->required();
  frames_cmd->add_option("--scale", frames_scale, "linear | quantile")
      ->check(CLI::IsMember({"linear", "quantile"}))
      ->capture_default_str();

  std::string stats_data;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Report payload sizes of a store");
  stats_cmd->add_option("--data", stats_data, "Store directory")->required();
  stats_cmd->add_option("--chunk-budget", budget, "Chunk soft budget in bytes");
  stats_cmd->add_flag("--json", stats_json, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ingest_cmd) {
      const IngestSpec spec = detail::load_spec(ingest_args);
      err << "reading " << ingest_args.in_path << " as " << to_string(spec.format) << "\n";
      const std::string source = detail::read_input(ingest_args.in_path);
      IngestStats stats;
      const Dataset dataset = ingest(source, spec, RegionRegistry::bundled(), &stats);
      ValidationReport report = validate(dataset);
      report.skipped_rows = stats.skipped_rows;
      for (const auto& s : stats.skipped) err << "skipped " << s << "\n";
      err << "packing " << chunk_keys(dataset).size() << " chunks\n";
      const PackedStore packed = PackedStore::pack(dataset);
      packed.write(ingest_out);
      out << detail::report_text(dataset, report);
      out << "chunks       " << packed.chunk_bytes.size() << " written to " << ingest_out << "\n";
      for (const auto& w : packed.size_report(budget).warnings) err << "warning: " << w << "\n";
      return 0;
    }
    if (*validate_cmd) {
      const IngestSpec spec = detail::load_spec(validate_args);
      const ValidationReport report = validate_source(detail::read_input(validate_args.in_path), spec);
      if (validate_json) {
        out << detail::report_json(report).dump(2) << "\n";
      } else {
        out << "violations   " << report.violations.size() << "\n";
        for (const auto& v : report.violations) out << "  " << v << "\n";
        for (const auto& c : report.indicators)
          out << "coverage     " << c.id << " " << c.observed << "/" << c.total << "\n";
        out << "periods with data " << report.periods_with_data << "/" << report.period_count << "\n";
        out << "skipped rows " << report.skipped_rows << "\n";
      }
      return report.ok() ? 0 : 1;
    }
    if (*pack_cmd) {
      const Store store = Store::open(pack_data);
      const Dataset dataset = store.dataset();
      const PackedStore packed = PackedStore::pack(dataset);
      if (packed.summary_bytes != store.summary_bytes())
        throw Error(Errc::corrupt_store, "summary.json does not match the summary rebuilt from the chunks");
      packed.write(pack_out);
      out << packed.size_report(budget).to_text();
      return 0;
    }
    if (*serve_cmd) {
      serve_cfg.data_dir = serve_data;
      serve_cfg.map_path = serve_map;
      Server server(serve_cfg);
      if (!server.store_error().empty()) err << "warning: store unavailable: " << server.store_error() << "\n";
      if (!server.map_error().empty()) err << "warning: map unavailable: " << server.map_error() << "\n";
      const int port = server.bind(serve_cfg.host, serve_cfg.port);
      if (port < 0) {
        err << "error: cannot listen on " << serve_cfg.host << ":" << serve_cfg.port << "\n";
        return 1;
      }
      err << "serving " << serve_data << " on http://" << serve_cfg.host << ":" << port << "\n";
      return server.listen_after_bind() ? 0 : 2;
    }
    if (*frames_cmd) {
      const Store store = Store::open(frames_data);
      const GlobalSummary& summary = store.summary();
      const std::string map = seismo::detail::read_file(frames_map);
      check_svg(map);
      const std::size_t first = detail::resolve_ordinal(frames_from, summary.periods);
      const std::size_t last = detail::resolve_ordinal(frames_to, summary.periods);
      if (last < first)
        throw Error(Errc::reversed_range, "--from " + frames_from + " is after --to " + frames_to);
      const auto scales = default_named_scales();
      const NamedScale* named = find_scale(scales, frames_scale);
      const ColorScale scale = named->build(summary, frames_track);
      fs::create_directories(frames_out);
      for (std::size_t ordinal = first; ordinal <= last; ++ordinal) {
        const RenderResult rendered = render_svg(color_frame(summary, ordinal, frames_track, scale), map);
        if (ordinal == first)
          for (const auto& w : rendered.warnings) err << "warning: " << w << "\n";
        seismo::detail::write_file(fs::path(frames_out) / ("frame-" + std::to_string(ordinal) + ".svg"), rendered.svg);
      }
      out << (last - first + 1) << " frames written to " << frames_out << "\n";
      return 0;
    }
    if (*stats_cmd) {
      const SizeReport report = Store::open(stats_data).size_report(budget);
      if (stats_json) out << report.to_json().dump(2) << "\n";
      else out << report.to_text();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"seismo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace seismo::cli
