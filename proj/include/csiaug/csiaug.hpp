#pragma once

#include "csiaug/augment.hpp"
#include "csiaug/channel_sim.hpp"
#include "csiaug/codec.hpp"
#include "csiaug/core.hpp"
#include "csiaug/dataset_io.hpp"
#include "csiaug/error.hpp"
#include "csiaug/ratio.hpp"
#include "csiaug/report.hpp"
#include "csiaug/rng.hpp"
#include "csiaug/scenario.hpp"
#include "csiaug/transform.hpp"
