#pragma once

// Umbrella header for the gabrad library: Radon sinograms, Gabor-Radon
// descriptors, a from-scratch one-against-one SVM, class-partitioned
// Hamming retrieval and the IRMA evaluation metric.

#include "gabrad/bitvec.hpp"
#include "gabrad/config.hpp"
#include "gabrad/errors.hpp"
#include "gabrad/gabor.hpp"
#include "gabrad/image.hpp"
#include "gabrad/io.hpp"
#include "gabrad/irma.hpp"
#include "gabrad/parallel.hpp"
#include "gabrad/pipeline.hpp"
#include "gabrad/radon.hpp"
#include "gabrad/retrieval.hpp"
#include "gabrad/rng.hpp"
#include "gabrad/svm.hpp"
#include "gabrad/synth.hpp"
