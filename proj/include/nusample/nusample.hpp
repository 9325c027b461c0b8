#pragma once

#include "nusample/core.hpp"
#include "nusample/geometry.hpp"
#include "nusample/sampling.hpp"
#include "nusample/spectral.hpp"
#include "nusample/balayage.hpp"
#include "nusample/frames.hpp"
#include "nusample/stft.hpp"
#include "nusample/psido.hpp"
#include "nusample/io.hpp"
#include "nusample/cli.hpp"
