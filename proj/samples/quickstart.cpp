// Generates one chart, converts it to SimVec and prints a QA item.
#include <iostream>

#include "simvec/simvec.hpp"

using namespace simvec;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;
  const auto items = chart::gen_corpus(1, {1, 1, 1}, seed);
  const chart::RenderedChart& c = items.front().chart;

  const SimVecDoc doc = svg::ingest_svg(c.svg);
  const std::string text = serialize_simvec(doc);
  std::cout << text << "\n";

  const std::size_t svg_tokens = count_tokens(c.svg), simvec_tokens = count_tokens(text);
  std::cout << "tokens: svg " << svg_tokens << ", simvec " << simvec_tokens << "\n";

  for (const auto& q : qa::gen_qa_suite(c.meta, seed)) {
    std::cout << "\nQ: " << q.question << "\n" << q.cot.text() << "\nA: " << q.answer.text() << "\n";
    break;
  }

  const eval::ReconReport self = eval::evaluate_reconstruction(doc, doc);
  std::cout << "\nself-eval text hit rate: " << self.text_hit_rate.value_or(0) << "\n";
}
