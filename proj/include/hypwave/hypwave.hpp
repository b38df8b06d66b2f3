#pragma once

#include "hypwave/errors.hpp"
#include "hypwave/fourier.hpp"
#include "hypwave/hopf.hpp"
#include "hypwave/io.hpp"
#include "hypwave/model.hpp"
#include "hypwave/ode.hpp"
#include "hypwave/orbit.hpp"
#include "hypwave/spectrum.hpp"
#include "hypwave/version.hpp"
