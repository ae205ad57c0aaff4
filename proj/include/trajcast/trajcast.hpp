#pragma once

// Umbrella header for the whole library.

#include "trajcast/core/error.hpp"
#include "trajcast/core/mat.hpp"
#include "trajcast/core/rng.hpp"
#include "trajcast/core/tensor.hpp"
#include "trajcast/data/archive.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/data/split.hpp"
#include "trajcast/data/targets.hpp"
#include "trajcast/data/windows.hpp"
#include "trajcast/eval/evaluate.hpp"
#include "trajcast/filter/savgol.hpp"
#include "trajcast/filter/smooth_track.hpp"
#include "trajcast/ngsim/parse.hpp"
#include "trajcast/ngsim/records.hpp"
#include "trajcast/ngsim/tracks.hpp"
#include "trajcast/nn/adam.hpp"
#include "trajcast/nn/checkpoint.hpp"
#include "trajcast/nn/dense.hpp"
#include "trajcast/nn/gradcheck.hpp"
#include "trajcast/nn/lstm.hpp"
#include "trajcast/nn/model.hpp"
#include "trajcast/nn/variants.hpp"
#include "trajcast/pipeline/config.hpp"
#include "trajcast/pipeline/evaluation.hpp"
#include "trajcast/pipeline/features.hpp"
#include "trajcast/scene/neighborhood.hpp"
#include "trajcast/synth/generator.hpp"
#include "trajcast/train/trainer.hpp"
