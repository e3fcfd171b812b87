#pragma once

// Umbrella header: the whole library in one include.

#include "ringpls/calendar.hpp"
#include "ringpls/common.hpp"
#include "ringpls/components.hpp"
#include "ringpls/config.hpp"
#include "ringpls/correlation.hpp"
#include "ringpls/crossval.hpp"
#include "ringpls/csv.hpp"
#include "ringpls/dataset.hpp"
#include "ringpls/image.hpp"
#include "ringpls/image_io.hpp"
#include "ringpls/intensity.hpp"
#include "ringpls/intensity_io.hpp"
#include "ringpls/metrics.hpp"
#include "ringpls/model_io.hpp"
#include "ringpls/palette.hpp"
#include "ringpls/plsr.hpp"
#include "ringpls/pollution.hpp"
#include "ringpls/profiles.hpp"
#include "ringpls/residuals.hpp"
#include "ringpls/rings.hpp"
#include "ringpls/similarity.hpp"
#include "ringpls/split.hpp"
#include "ringpls/standardise.hpp"
#include "ringpls/synth.hpp"
#include "ringpls/thresholds.hpp"
#include "ringpls/time.hpp"
#include "ringpls/vip.hpp"
