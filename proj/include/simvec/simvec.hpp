#pragma once

#include "simvec/core/color.hpp"
#include "simvec/core/format.hpp"
#include "simvec/core/grammar.hpp"
#include "simvec/core/tokens.hpp"
#include "simvec/core/types.hpp"
#include "simvec/core/validate.hpp"
#include "simvec/xml/dom.hpp"
#include "simvec/svg/affine.hpp"
#include "simvec/svg/ingest.hpp"
#include "simvec/svg/paint.hpp"
#include "simvec/svg/path.hpp"
#include "simvec/svg/primitive.hpp"
#include "simvec/chart/corpus.hpp"
#include "simvec/chart/data.hpp"
#include "simvec/chart/meta.hpp"
#include "simvec/chart/provider.hpp"
#include "simvec/chart/random.hpp"
#include "simvec/chart/render.hpp"
#include "simvec/chart/scale.hpp"
#include "simvec/chart/scene.hpp"
#include "simvec/qa/answer.hpp"
#include "simvec/qa/arith.hpp"
#include "simvec/qa/qa.hpp"
#include "simvec/antiqua/antiqua.hpp"
#include "simvec/eval/match.hpp"
#include "simvec/eval/qa_score.hpp"
#include "simvec/eval/recon.hpp"
#include "simvec/pipeline/commands.hpp"
#include "simvec/pipeline/config.hpp"
#include "simvec/pipeline/io.hpp"
#include "simvec/pipeline/manifest.hpp"
#include "simvec/pipeline/render.hpp"
