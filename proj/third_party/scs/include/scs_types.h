/*
 * Public header including definitions of primitive types used in SCS.
 * Pre-generated for 32-bit indices and double precision.
 */
#ifndef SCS_TYPES_H_GUARD
#define SCS_TYPES_H_GUARD

#ifdef __cplusplus
extern "C" {
#endif

typedef int scs_int;
typedef double scs_float;
typedef double scs_complex_float[2]; /* [real, imaginary] */

#ifdef __cplusplus
}
#endif
#endif
