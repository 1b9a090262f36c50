#pragma once

#include "bonlab/analysis.hpp"
#include "bonlab/dist.hpp"
#include "bonlab/divergence.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/experiment.hpp"
#include "bonlab/instance.hpp"
#include "bonlab/io.hpp"
#include "bonlab/mc.hpp"
#include "bonlab/numerics.hpp"
#include "bonlab/ranking.hpp"
#include "bonlab/reward.hpp"
#include "bonlab/rng.hpp"
#include "bonlab/selector.hpp"
#include "bonlab/svg.hpp"
#include "bonlab/version.hpp"
#include "bonlab/winrate.hpp"
