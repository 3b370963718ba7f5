/* Generated by cbindgen from crates/ffi/src/lib.rs. */

#ifndef ANDOR_H
#define ANDOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Uniform over labelled trees.
 */
#define ANDOR_MODEL_G 0

/**
 * Uniform over equivalence classes of trees.
 */
#define ANDOR_MODEL_E 1

/**
 * Exact distribution on functions: truth tables on `x1..xk` in model G,
 * function classes in model E.
 */
typedef struct AndorDistribution AndorDistribution;

/**
 * Draws uniform trees (model G) or class representatives (model E).
 */
typedef struct AndorSampler AndorSampler;

/**
 * An And/Or tree.
 */
typedef struct AndorTree AndorTree;

typedef int32_t AndorStatus;

#define ANDOR_OK 0

/**
 * A required pointer argument was null.
 */
#define ANDOR_ERR_NULL 1

/**
 * An argument is outside the domain of the operation.
 */
#define ANDOR_ERR_DOMAIN 2

#define ANDOR_ERR_PARSE 3

/**
 * An enumeration would exceed its budget.
 */
#define ANDOR_ERR_BUDGET 4

/**
 * A truth table would need more variables than supported.
 */
#define ANDOR_ERR_SUPPORT 5

/**
 * The output buffer is too small.
 */
#define ANDOR_ERR_BUFFER 6

/**
 * Input text is not valid UTF-8.
 */
#define ANDOR_ERR_UTF8 7

#define ANDOR_ERR_PANIC 8

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the last failure on this thread into `buf`. The
 * stored message survives a call with a short buffer.
 */
AndorStatus andor_last_error(char *buf, size_t len, size_t *needed);

/**
 * Writes the number of trees (model G) or classes (model E) of size `n`
 * over `k` variables, in decimal.
 */
AndorStatus andor_count(uint32_t n,
                        uint32_t k,
                        uint32_t model_tag,
                        char *buf,
                        size_t len,
                        size_t *needed);

/**
 * `rat_n = Lab(n-1, k) / Lab(n, k)` as a double.
 */
AndorStatus andor_rat(uint32_t n, uint32_t k, uint32_t model_tag, double *result);

/**
 * The threshold `M_n`.
 */
AndorStatus andor_threshold(uint32_t n, uint64_t *result);

/**
 * Complexity of the function with truth table `bits` on `m` variables
 * (bit `i` is the value at the assignment whose bit `j - 1` is `x_j`).
 */
AndorStatus andor_complexity(uint32_t m, uint64_t bits, uint32_t *result);

/**
 * Monte Carlo estimate of the probability of satisfiability, with its 95%
 * Wilson interval.
 */
AndorStatus andor_sat_estimate(uint32_t n,
                               uint32_t k,
                               uint32_t model_tag,
                               uint64_t samples,
                               uint64_t seed,
                               double *point,
                               double *low,
                               double *high);

/**
 * Parses a tree such as `(and x1 (or (not x2) x3))`.
 */
AndorStatus andor_tree_parse(const char *text, struct AndorTree **tree);

void andor_tree_free(struct AndorTree *tree);

AndorStatus andor_tree_size(const struct AndorTree *tree, size_t *result);

AndorStatus andor_tree_to_string(const struct AndorTree *tree,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

/**
 * Truth table of the tree on `x1..xm`.
 */
AndorStatus andor_tree_truth_table(const struct AndorTree *tree, uint32_t m, uint64_t *bits);

AndorStatus andor_sampler_new(uint32_t n,
                              uint32_t k,
                              uint32_t model_tag,
                              uint64_t seed,
                              struct AndorSampler **sampler);

AndorStatus andor_sampler_next(struct AndorSampler *sampler, struct AndorTree **tree);

void andor_sampler_free(struct AndorSampler *sampler);

AndorStatus andor_distribution_new(uint32_t n,
                                   uint32_t k,
                                   uint32_t model_tag,
                                   uint64_t budget,
                                   struct AndorDistribution **dist);

AndorStatus andor_distribution_len(const struct AndorDistribution *dist, size_t *len);

/**
 * Entry `index`: the function (or class representative) as `support`
 * variables and table `bits`, and its probability.
 */
AndorStatus andor_distribution_entry(const struct AndorDistribution *dist,
                                     size_t index,
                                     uint32_t *support,
                                     uint64_t *bits,
                                     double *probability);

void andor_distribution_free(struct AndorDistribution *dist);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANDOR_H */
