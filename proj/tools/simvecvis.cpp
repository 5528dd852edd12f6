#include <iostream>

#include "CLI11.hpp"
#include "simvec/simvec.hpp"

using namespace simvec;
using namespace simvec::pipeline;

namespace {

struct Args {
  std::string config;
  std::uint64_t seed = 42;
  std::int64_t n = 300;
  std::string mix = "1:1:1";
  std::string out;
  std::string oldify_preset;
  bool strict = false;
  int workers = 0;
  std::string rasterizer_cmd;
  std::string input;
  std::string predictions;
  std::string mode = "recon";
};

// flags given on the command line win over the config file
PipelineConfig effective(const CLI::App& app, const Args& a) {
  PipelineConfig c;
  if (!a.config.empty()) c = load_config(a.config);
  auto given = [&](const char* name) {
    const CLI::Option* o = app.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--seed")) c.seed = a.seed;
  if (given("--n")) c.n = a.n;
  if (given("--mix")) c.mix = a.mix;
  if (given("--out")) c.out = a.out;
  if (given("--oldify-preset")) c.oldify_preset = a.oldify_preset;
  if (given("--strict")) c.strict = a.strict;
  if (given("--workers")) c.workers = a.workers;
  if (given("--rasterizer-cmd")) c.rasterizer_cmd = a.rasterizer_cmd;
  return c;
}

antiqua::AntiquaParams style_of(const std::string& preset, std::uint64_t seed) {
  try {
    return antiqua::preset(preset, seed);
  } catch (const antiqua::AntiquaError& e) {
    throw PipelineError(ExitCode::usage, e.what());
  }
}

int run_synth(const CLI::App& sub, const Args& a) {
  const PipelineConfig c = effective(sub, a);
  if (c.n < 0) throw PipelineError(ExitCode::usage, "--n must be >= 0");
  SynthOptions o;
  o.n = c.n;
  o.seed = c.seed;
  o.out = c.out;
  o.workers = c.workers;
  try {
    o.mix = chart::parse_mix(c.mix);
  } catch (const std::invalid_argument& e) {
    throw PipelineError(ExitCode::usage, e.what());
  }
  if (!c.oldify_preset.empty()) o.style = style_of(c.oldify_preset, c.seed);
  o.rasterizer = {c.rasterizer_cmd, c.raster_width, c.raster_timeout};
  o.provider = {c.provider_cmd, c.provider_endpoint, c.provider_timeout};
  const SynthSummary s = cmd_synth(o);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << s.manifest.string() << ": " << s.records << " records";
  for (const auto& [type, count] : s.per_type) std::cout << ", " << type << " " << count;
  std::cout << "; qa retrieve " << s.retrieve_items << ", extreme " << s.extreme_items << "\n";
  return 0;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SimVec chart corpus tool"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* s) { s->add_option("--config", a.config, "INI file")->check(CLI::ExistingFile); };

  auto* synth = app.add_subcommand("synth", "generate charts, SimVec, QA and a manifest");
  common(synth);
  synth->add_option("--seed", a.seed, "master seed");
  synth->add_option("--n", a.n, "number of charts");
  synth->add_option("--mix", a.mix, "bar:line:area weights");
  synth->add_option("--out", a.out, "output directory");
  synth->add_option("--oldify-preset", a.oldify_preset, "also write historical variants (none, paper)");
  synth->add_option("--workers", a.workers, "worker threads, 0 = all cores");
  synth->add_option("--rasterizer-cmd", a.rasterizer_cmd, "command with {svg} {png} {width}, or http:// URL");

  auto* convert = app.add_subcommand("convert", "SVG to SimVec");
  common(convert);
  convert->add_option("input", a.input, "SVG file")->required();
  convert->add_option("--out", a.out, "SimVec file (stdout if omitted)");
  convert->add_flag("--strict", a.strict, "reject unsupported SVG constructs");

  auto* render = app.add_subcommand("render", "SimVec to SVG");
  render->add_option("input", a.input, "SimVec file")->required();
  render->add_option("--out", a.out, "SVG file (stdout if omitted)");

  auto* oldify = app.add_subcommand("oldify", "apply a historical style to an SVG");
  common(oldify);
  oldify->add_option("input", a.input, "SVG file")->required();
  oldify->add_option("--out", a.out, "SVG file (stdout if omitted)");
  oldify->add_option("--oldify-preset", a.oldify_preset, "none or paper (default paper)");
  oldify->add_option("--seed", a.seed, "noise seed");

  auto* eval = app.add_subcommand("eval", "score predictions against a manifest");
  eval->add_option("manifest", a.input, "manifest.jsonl")->required()->check(CLI::ExistingFile);
  eval->add_option("predictions", a.predictions, "JSONL predictions")->required();
  eval->add_option("--mode", a.mode, "recon or qa")->check(CLI::IsMember({"recon", "qa"}));
  eval->add_option("--out", a.out, "report prefix, writes <prefix>.json and <prefix>.txt");

  auto* tokens = app.add_subcommand("tokens", "token counts of SVG vs SimVec");
  tokens->add_option("manifest", a.input, "manifest.jsonl")->required();
  tokens->add_option("--out", a.out, "JSON report file");

  auto* verify = app.add_subcommand("manifest-verify", "re-check a packaged manifest");
  verify->add_option("manifest", a.input, "manifest.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*synth) return run_synth(*synth, a);
    if (*convert) {
      const PipelineConfig c = effective(*convert, a);
      emit(cmd_convert(a.input, a.out, c.strict), a.out);
    } else if (*render) {
      emit(cmd_render(a.input, a.out), a.out);
    } else if (*oldify) {
      PipelineConfig c = effective(*oldify, a);
      if (c.oldify_preset.empty()) c.oldify_preset = "paper";
      emit(cmd_oldify(a.input, a.out, style_of(c.oldify_preset, c.seed)), a.out);
    } else if (*eval) {
      const EvalOutput r = cmd_eval(a.input, a.predictions, a.mode == "qa" ? EvalMode::qa : EvalMode::recon, a.out);
      std::cout << r.table;
    } else if (*tokens) {
      const TokenReport r = cmd_tokens(a.input);
      const nlohmann::json j = r;
      if (!a.out.empty()) write_atomic(a.out, j.dump(2) + "\n");
      for (const auto& row : r.rows)
        std::cout << row.id << "\t" << row.svg_tokens << "\t" << row.simvec_tokens << "\t" << format_decimal(row.reduction, 4) << "\n";
      std::cout << "median reduction: " << (r.median ? format_decimal(*r.median, 4) : std::string("n/a")) << "\n";
    } else if (*verify) {
      const auto problems = verify_manifest(a.input);
      for (const auto& p : problems) std::cerr << p << "\n";
      if (!problems.empty()) return static_cast<int>(ExitCode::validation);
      std::cout << "ok\n";
    }
    return 0;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  }
}
