#pragma once

#include "kronsample/dense_sampler.hpp"
#include "kronsample/diag_sampler.hpp"
#include "kronsample/errors.hpp"
#include "kronsample/experiments.hpp"
#include "kronsample/greedy.hpp"
#include "kronsample/linalg.hpp"
#include "kronsample/matrix_io.hpp"
#include "kronsample/mimo.hpp"
#include "kronsample/model.hpp"
#include "kronsample/oracle.hpp"
#include "kronsample/random_sampler.hpp"
#include "kronsample/recon.hpp"
#include "kronsample/rng.hpp"
#include "kronsample/serialize.hpp"
