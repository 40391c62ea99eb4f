#pragma once

// Umbrella header for the VQA reasoning library: scene and prediction
// model, detector simulator, confidence thresholding, question compiler,
// ASP emission, answer engine, and the benchmark harness.

#include "vqansr/attributes.hpp"
#include "vqansr/object_class.hpp"
#include "vqansr/geometry.hpp"
#include "vqansr/scene.hpp"
#include "vqansr/prediction.hpp"
#include "vqansr/rng.hpp"
#include "vqansr/json_io.hpp"
#include "vqansr/confidence.hpp"
#include "vqansr/detector_sim.hpp"
#include "vqansr/question.hpp"
#include "vqansr/facts.hpp"
#include "vqansr/asp_emit.hpp"
#include "vqansr/asp_syntax.hpp"
#include "vqansr/reasoner.hpp"
#include "vqansr/synthetic.hpp"
#include "vqansr/toml_lite.hpp"
#include "vqansr/harness.hpp"
