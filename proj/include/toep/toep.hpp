#pragma once

#include "toep/types.hpp"
#include "toep/fft.hpp"
#include "toep/core.hpp"
#include "toep/approx.hpp"
#include "toep/precond.hpp"
#include "toep/krylov.hpp"
#include "toep/estimate.hpp"
#include "toep/spectra.hpp"
#include "toep/corpus.hpp"
#include "toep/runner.hpp"
#include "toep/io.hpp"
#include "toep/tables.hpp"
