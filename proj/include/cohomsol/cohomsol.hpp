#pragma once

#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"
#include "cohomsol/builtins.hpp"
#include "cohomsol/series.hpp"
#include "cohomsol/singular_ivp.hpp"
#include "cohomsol/dopri5.hpp"
#include "cohomsol/soliton_flow.hpp"
#include "cohomsol/closed_forms.hpp"
#include "cohomsol/indeterminacy.hpp"
#include "cohomsol/config.hpp"
