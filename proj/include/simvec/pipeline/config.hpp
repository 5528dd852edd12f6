#pragma once

#include <cstdint>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "simvec/pipeline/io.hpp"

namespace simvec::pipeline {

/// Run settings. An INI file fills these; command-line flags win.
///
///   [synth]       seed, n, mix, out, oldify-preset, workers
///   [ingest]      strict
///   [rasterizer]  cmd, width, timeout
///   [provider]    cmd, endpoint, timeout
struct PipelineConfig {
  std::uint64_t seed = 42;
  std::int64_t n = 300;
  std::string mix = "1:1:1";
  std::string out = "out";
  std::string oldify_preset;
  int workers = 0;  // 0 = hardware threads
  bool strict = false;
  std::string rasterizer_cmd;
  int raster_width = 1000;
  int raster_timeout = 60;
  std::string provider_cmd;
  std::string provider_endpoint;
  int provider_timeout = 10;
};

inline PipelineConfig load_config(const fs::path& path, PipelineConfig base = {}) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    const bool missing = !fs::exists(path);
    throw PipelineError(missing ? ExitCode::io : ExitCode::usage, "config " + path.string() + ": " + e.message());
  }
  try {
    PipelineConfig c = base;
    auto read = [&](const char* key, auto& field) {
      if (tree.get_optional<std::string>(key)) field = tree.get<std::decay_t<decltype(field)>>(key);
    };
    read("synth.seed", c.seed);
    read("synth.n", c.n);
    read("synth.mix", c.mix);
    read("synth.out", c.out);
    read("synth.oldify-preset", c.oldify_preset);
    read("synth.workers", c.workers);
    read("ingest.strict", c.strict);
    read("rasterizer.cmd", c.rasterizer_cmd);
    read("rasterizer.width", c.raster_width);
    read("rasterizer.timeout", c.raster_timeout);
    read("provider.cmd", c.provider_cmd);
    read("provider.endpoint", c.provider_endpoint);
    read("provider.timeout", c.provider_timeout);
    return c;
  } catch (const boost::property_tree::ptree_error& e) {
    throw PipelineError(ExitCode::usage, "config " + path.string() + ": " + e.what());
  }
}

}  // namespace simvec::pipeline
