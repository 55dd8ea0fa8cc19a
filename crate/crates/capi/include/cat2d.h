/* C API for the cat2d intrinsic-geometry toolkit.
 *
 * All functions return a status code (CAT2D_OK on success) and report
 * details for the most recent failure via cat2d_last_error(), whose
 * message is thread-local and valid until the next failing call on the
 * same thread.
 */

#ifndef CAT2D_H
#define CAT2D_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
#define CAT2D_OK 0
#define CAT2D_ERR_NULL 1        /* a required pointer was NULL */
#define CAT2D_ERR_BAD_INPUT 2   /* malformed JSON, matrix or scene data */
#define CAT2D_ERR_UNSUPPORTED 3 /* operation undefined for this scene kind */
#define CAT2D_ERR_GEOMETRY 4    /* a geometric computation failed */

/* Verdicts reported by cat2d_verify. */
#define CAT2D_VERDICT_CONSISTENT 0
#define CAT2D_VERDICT_VIOLATION 1
#define CAT2D_VERDICT_INCONCLUSIVE 2

/* Opaque handle around a parsed scene. */
typedef struct Cat2dScene Cat2dScene;

/* Thread-local message for the most recent failure. Never NULL. */
const char *cat2d_last_error(void);

/* Parse a scene from NUL-terminated JSON text ("schema": 1). On success
 * *out owns a new handle that must be released with cat2d_scene_free. */
int cat2d_scene_load_json(const char *json, Cat2dScene **out);

/* Release a scene handle; NULL is a no-op. */
void cat2d_scene_free(Cat2dScene *scene);

/* Run the comparison-inequality verifier on a scene. trials == 0 and
 * tol <= 0 select the built-in defaults (10000 trials, 1e-9). On
 * success *verdict holds one of the CAT2D_VERDICT_* constants. */
int cat2d_verify(const Cat2dScene *scene, uint64_t seed, size_t trials,
                 double tol, int *verdict);

/* Intrinsic (shortest-path) distance between two points of a
 * plane-domain scene. */
int cat2d_distance(const Cat2dScene *scene, double x1, double y1, double x2,
                   double y2, double *dist);

/* Filling-radius estimate of a dense row-major n-by-n distance matrix,
 * filling the fundamental cycle 0-1-...-(n-1)-0. */
int cat2d_filling_radius(const double *matrix, size_t n, double *out);

#ifdef __cplusplus
}
#endif

#endif /* CAT2D_H */
