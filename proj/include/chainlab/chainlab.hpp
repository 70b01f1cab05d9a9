#ifndef CHAINLAB_CHAINLAB_HPP
#define CHAINLAB_CHAINLAB_HPP

/// Umbrella header: exact inference for discrete chain models.
///
/// The library covers four model families over a shared vocabulary of
/// label/observation alphabets:
///   - HmmModel: generative hidden Markov chains (per-position or stationary),
///   - LcCrfModel: linear-chain conditional random fields with pairwise and
///     unary score tables,
///   - DiscriminativeParams: chains parameterized directly by
///     label-given-observation distributions,
///   - PotentialChain: positive pairwise potentials over one state space.
/// plus the constructions connecting them (potential chains to Markov
/// chains, CRFs to HMMs, HMMs to discriminative parameters), exact
/// forward-backward / max-sum inference for each parameterization,
/// enumeration oracles, corpus estimation, JSON serialization, and
/// randomized certification checks.

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/crf.hpp"
#include "chainlab/crf_to_hmm.hpp"
#include "chainlab/discriminative.hpp"
#include "chainlab/discriminative_inference.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/estimation.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/hmm_inference.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"
#include "chainlab/oracle.hpp"
#include "chainlab/potential_chain.hpp"
#include "chainlab/random.hpp"
#include "chainlab/sequence.hpp"
#include "chainlab/serialize.hpp"
#include "chainlab/verify.hpp"

#endif  // CHAINLAB_CHAINLAB_HPP
