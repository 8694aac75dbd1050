#pragma once

#include "pjlab/numeric.hpp"
#include "pjlab/quadrature.hpp"
#include "pjlab/differentiate.hpp"
#include "pjlab/weight.hpp"
#include "pjlab/moments.hpp"
#include "pjlab/ortho.hpp"
#include "pjlab/auxiliaries.hpp"
#include "pjlab/pipeline.hpp"
#include "pjlab/closed_forms.hpp"
#include "pjlab/residual.hpp"
#include "pjlab/identities.hpp"
#include "pjlab/io.hpp"
#include "pjlab/config.hpp"
