#ifndef HECKE_H
#define HECKE_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HeckeStatus {
  HECKE_STATUS_OK = 0,
  HECKE_STATUS_NULL_POINTER = 1,
  HECKE_STATUS_INVALID_ARGUMENT = 2,
  HECKE_STATUS_SINGULAR = 3,
  HECKE_STATUS_CAP_EXCEEDED = 4,
  HECKE_STATUS_NOT_PRIME = 5,
  HECKE_STATUS_INCOMPATIBLE = 6,
  HECKE_STATUS_OUTSIDE_INTERIOR = 7,
  HECKE_STATUS_DIVERGENT = 8,
  HECKE_STATUS_UNCERTIFIED = 9,
  HECKE_STATUS_NOT_HOMOGENEOUS = 10,
  HECKE_STATUS_UNSUPPORTED = 11,
  HECKE_STATUS_BUFFER_TOO_SMALL = 12,
  HECKE_STATUS_PANIC = 13,
} HeckeStatus;

/**
 * Which generator [`hecke_operator_generator`] builds.
 */
typedef enum HeckeGenerator {
  HECKE_GENERATOR_V = 0,
  HECKE_GENERATOR_V_STAR = 1,
  HECKE_GENERATOR_U = 2,
  HECKE_GENERATOR_U_STAR = 3,
} HeckeGenerator;

typedef struct HeckeElement HeckeElement;

typedef struct HeckeLattice HeckeLattice;

typedef struct HeckeLatticeList HeckeLatticeList;

typedef struct HeckeOperator HeckeOperator;

typedef struct HeckeWindow HeckeWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread (empty after a success).
 */
enum HeckeStatus hecke_last_error(char *buf, size_t cap, size_t *len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hecke_version(void);

/**
 * Lattice spanned by the rows of `[[n0/d0, n1/d1], [n2/d2, n3/d3]]`.
 */
enum HeckeStatus hecke_lattice_from_basis(const int64_t *num,
                                          const int64_t *den,
                                          struct HeckeLattice **result);

struct HeckeLattice *hecke_lattice_z2(void);

struct HeckeLattice *hecke_lattice_clone(const struct HeckeLattice *l);

void hecke_lattice_free(struct HeckeLattice *l);

/**
 * `[L : Z^2]`; the lattice must contain `Z^2`.
 */
enum HeckeStatus hecke_lattice_index(const struct HeckeLattice *l, uint64_t *index);

/**
 * Denominator `q` and Hermite entries `(a, c, d)` of `q L`.
 */
enum HeckeStatus hecke_lattice_hnf(const struct HeckeLattice *l, int64_t *q, int64_t *hnf);

enum HeckeStatus hecke_lattice_sum(const struct HeckeLattice *a,
                                   const struct HeckeLattice *b,
                                   struct HeckeLattice **result);

enum HeckeStatus hecke_lattice_intersect(const struct HeckeLattice *a,
                                         const struct HeckeLattice *b,
                                         struct HeckeLattice **result);

/**
 * 1 when `b ⊆ a`, else 0; -1 on a null argument.
 */
int32_t hecke_lattice_contains(const struct HeckeLattice *a, const struct HeckeLattice *b);

/**
 * 1 when the lattices are equal, else 0; -1 on a null argument.
 */
int32_t hecke_lattice_equal(const struct HeckeLattice *a, const struct HeckeLattice *b);

/**
 * JSON form `{"q":..,"hnf":[a,c,d]}`.
 */
enum HeckeStatus hecke_lattice_to_json(const struct HeckeLattice *l,
                                       char *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * All `L ⊇ Z^2` of index `n`, in canonical order.
 */
enum HeckeStatus hecke_superlattices(uint64_t n, struct HeckeLatticeList **result);

size_t hecke_lattice_list_len(const struct HeckeLatticeList *list);

/**
 * New handle for element `i`, or null when out of range.
 */
struct HeckeLattice *hecke_lattice_list_get(const struct HeckeLatticeList *list, size_t i);

void hecke_lattice_list_free(struct HeckeLatticeList *list);

struct HeckeElement *hecke_element_new(void);

void hecke_element_free(struct HeckeElement *f);

/**
 * Adds `num/den` times the class `diag(d1, d2)`, `d1 | d2`.
 */
enum HeckeStatus hecke_element_add_term(struct HeckeElement *f,
                                        uint64_t d1,
                                        uint64_t d2,
                                        int64_t num,
                                        int64_t den);

enum HeckeStatus hecke_element_convolve(const struct HeckeElement *a,
                                        const struct HeckeElement *b,
                                        struct HeckeElement **result);

/**
 * Coefficient of `diag(d1, d2)` as `num/den` in lowest terms.
 */
enum HeckeStatus hecke_element_coeff(const struct HeckeElement *f,
                                     uint64_t d1,
                                     uint64_t d2,
                                     int64_t *num,
                                     int64_t *den);

/**
 * Number of classes with a nonzero coefficient.
 */
size_t hecke_element_support_len(const struct HeckeElement *f);

/**
 * JSON list `[{"class":[d1,d2],"coeff":"n/d"}, ...]` in class order.
 */
enum HeckeStatus hecke_element_to_json(const struct HeckeElement *f,
                                       char *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * All lattices of index `p^j`, `j ≤ depth`.
 */
enum HeckeStatus hecke_window_prime(uint64_t p, uint32_t depth, struct HeckeWindow **result);

/**
 * All lattices of index at most `bound`, interior `index * margin ≤ bound`.
 */
enum HeckeStatus hecke_window_global(uint64_t bound, uint64_t margin, struct HeckeWindow **result);

void hecke_window_free(struct HeckeWindow *w);

size_t hecke_window_len(const struct HeckeWindow *w);

size_t hecke_window_interior(const struct HeckeWindow *w);

/**
 * New handle for basis lattice `i`, or null when out of range.
 */
struct HeckeLattice *hecke_window_lattice(const struct HeckeWindow *w, size_t i);

enum HeckeStatus hecke_operator_generator(const struct HeckeWindow *w,
                                          enum HeckeGenerator gen,
                                          uint64_t p,
                                          struct HeckeOperator **result);

/**
 * `π(f)` on the window.
 */
enum HeckeStatus hecke_operator_hecke(const struct HeckeWindow *w,
                                      const struct HeckeElement *f,
                                      struct HeckeOperator **result);

enum HeckeStatus hecke_operator_mul(const struct HeckeOperator *a,
                                    const struct HeckeOperator *b,
                                    struct HeckeOperator **result);

void hecke_operator_free(struct HeckeOperator *op);

size_t hecke_operator_dim(const struct HeckeOperator *op);

size_t hecke_operator_nnz(const struct HeckeOperator *op);

/**
 * 1 when column `col` has image outside the window, else 0; -1 on null.
 */
int32_t hecke_operator_is_boundary(const struct HeckeOperator *op, size_t col);

/**
 * Entry `(row, col)` as `num/den`.
 */
enum HeckeStatus hecke_operator_entry(const struct HeckeOperator *op,
                                      size_t row,
                                      size_t col,
                                      int64_t *num,
                                      int64_t *den);

/**
 * Triplets `[{"row":..,"col":..,"value":"n/d"}, ...]` in `(row, col)` order.
 */
enum HeckeStatus hecke_operator_to_json(const struct HeckeOperator *op,
                                        char *buf,
                                        size_t cap,
                                        size_t *len);

/**
 * Exact projection identity on `prime(p, k)`; `pass` is 1 when it holds.
 */
enum HeckeStatus hecke_check_projection(uint64_t p, uint32_t k, int32_t *pass);

/**
 * Local partition function: partial sum to `depth` and the Euler factor.
 */
enum HeckeStatus hecke_partition_prime(uint64_t p,
                                       const char *beta,
                                       uint32_t depth,
                                       double *partial,
                                       double *closed);

/**
 * Global partition function `Σ_{n≤bound} σ1(n) n^-β` and `ζ(β)ζ(β-1)`.
 */
enum HeckeStatus hecke_partition_global(const char *beta,
                                        uint64_t bound,
                                        double *partial,
                                        double *closed);

/**
 * `φ_{β,p}(v_p* v_p)` truncated at `depth`, with its certified error bound.
 */
enum HeckeStatus hecke_kms_v_star_v(uint64_t p,
                                    const char *beta,
                                    uint32_t depth,
                                    double *value,
                                    double *bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HECKE_H */
