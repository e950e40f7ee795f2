#pragma once

#include "azlab/chaos.hpp"
#include "azlab/config.hpp"
#include "azlab/dynamics.hpp"
#include "azlab/error.hpp"
#include "azlab/horseshoe.hpp"
#include "azlab/hypothesis.hpp"
#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"
#include "azlab/radial.hpp"
#include "azlab/raster.hpp"
#include "azlab/runner.hpp"
#include "azlab/symbolic.hpp"
#include "azlab/types.hpp"
