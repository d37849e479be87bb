// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qring/qring.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

static const double pi = 3.141592653589793;

static void test_u2(void) {
  const qring_complex s1[4] = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
  qring_u2 u;
  EXPECT(qring_u2_from_matrix(s1, &u) == QRING_OK);
  EXPECT(fabs(u.xi - pi / 2) < 1e-14);
  qring_complex back[4];
  EXPECT(qring_u2_to_matrix(&u, back) == QRING_OK);
  for (int i = 0; i < 4; ++i) EXPECT(fabs(back[i].re - s1[i].re) + fabs(back[i].im) < 1e-14);

  const qring_complex bad[4] = {{2, 0}, {0, 0}, {0, 0}, {1, 0}};
  EXPECT(qring_u2_from_matrix(bad, &u) == QRING_NON_UNITARY);
  EXPECT(strlen(qring_last_error()) > 0);
  EXPECT(strcmp(qring_status_string(QRING_NON_UNITARY), "NonUnitary") == 0);

  qring_classification c;
  const qring_complex mi[4] = {{-1, 0}, {0, 0}, {0, 0}, {-1, 0}};
  EXPECT(qring_u2_from_matrix(mi, &u) == QRING_OK);
  const qring_geometry g = {1.0, 1.0};
  EXPECT(qring_u2_classify(&u, &g, &c) == QRING_OK);
  EXPECT(c.flags & QRING_FLAG_F1);
  EXPECT(c.flags & QRING_FLAG_F4);
  EXPECT(c.flags & QRING_FLAG_SELF_DUAL);
  EXPECT(c.has_walls && c.walls[0] == 0.0 && c.walls[1] == 0.0);

  qring_u2 draws[8];
  EXPECT(qring_haar_u2(5, 8, draws) == QRING_OK);
  for (int i = 0; i < 8; ++i) {
    qring_u2 p, t;
    qring_triple a, b;
    double d = 1;
    EXPECT(qring_u2_parity(&draws[i], &p) == QRING_OK);
    EXPECT(qring_u2_p_theta(&p, 0.3, &t) == QRING_OK);
    qring_u2_triple(&draws[i], &a);
    qring_u2_triple(&t, &b);
    EXPECT(qring_triple_distance(&a, &b, &d) == QRING_OK);
    EXPECT(d < 1e-14);
  }
}

static void test_spectrum_and_inversion(void) {
  const qring_complex s1[4] = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
  const qring_geometry g = {1.0, 1.0};
  qring_u2 u;
  qring_u2_from_matrix(s1, &u);
  qring_spectrum* s = NULL;
  EXPECT(qring_spectrum_compute(&u, &g, 20, NULL, &s) == QRING_OK);
  EXPECT(qring_spectrum_size(s) == 21);
  qring_level lv;
  EXPECT(qring_spectrum_level(s, 0, &lv) == QRING_OK);
  EXPECT(lv.sector == QRING_ZERO && lv.multiplicity == 1);
  for (size_t i = 1; i < 21; ++i) {
    qring_spectrum_level(s, i, &lv);
    EXPECT(lv.multiplicity == 2);
    EXPECT(fabs(lv.wavenumber - 2 * pi * (double)i) < 1e-10 * (double)i);
  }
  EXPECT(qring_spectrum_level(s, 99, &lv) == QRING_INVALID_ARGUMENT);

  qring_prefix* p = NULL;
  EXPECT(qring_prefix_from_spectrum(s, &g, &p) == QRING_OK);
  qring_inversion inv;
  EXPECT(qring_invert(p, QRING_FIT, 0, &inv) == QRING_OK);
  EXPECT(fabs(inv.triple.xi - pi / 2) < 1e-9 && fabs(inv.triple.beta_i + 1) < 1e-9);
  qring_prefix_free(p);
  qring_spectrum_free(s);

  qring_u2 draw;
  qring_haar_u2(11, 1, &draw);
  EXPECT(qring_spectrum_compute(&draw, &g, 200, NULL, &s) == QRING_OK);
  EXPECT(qring_prefix_from_spectrum(s, &g, &p) == QRING_OK);
  EXPECT(qring_invert(p, QRING_BOTH, 0, &inv) == QRING_OK);
  qring_triple truth;
  double d = 1;
  qring_u2_triple(&draw, &truth);
  qring_triple_distance(&truth, &inv.triple, &d);
  EXPECT(d < 1e-3);
  EXPECT(inv.has_fit);
  qring_triple_distance(&truth, &inv.fit, &d);
  EXPECT(d < 1e-9);
  qring_prefix_free(p);
  qring_spectrum_free(s);

  const double bad_k[3] = {3.0, 2.0, 1.0};
  p = NULL;
  EXPECT(qring_prefix_create(&g, bad_k, 3, 0, NULL, 0, &p) == QRING_INVALID_ARGUMENT);
  EXPECT(p == NULL);
}

static void test_two_point(void) {
  const qring_complex s1[4] = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
  const qring_geometry g = {1.0, 1.0};
  qring_u2 free_joint, draw;
  qring_u2_from_matrix(s1, &free_joint);
  qring_haar_u2(3, 1, &draw);
  qring_spectrum *one = NULL, *two = NULL;
  EXPECT(qring_spectrum_compute(&draw, &g, 12, NULL, &one) == QRING_OK);
  EXPECT(qring_spectrum_compute_two_point(&draw, &free_joint, &g, 12, NULL, &two) == QRING_OK);
  EXPECT(qring_spectrum_size(one) == qring_spectrum_size(two));
  for (size_t i = 0; i < qring_spectrum_size(one); ++i) {
    qring_level a, b;
    qring_spectrum_level(one, i, &a);
    qring_spectrum_level(two, i, &b);
    EXPECT(fabs(a.energy - b.energy) < 1e-8 * (1 + fabs(a.energy)));
  }
  qring_spectrum_free(one);
  qring_spectrum_free(two);

  const qring_complex not_su2[4] = {{0, 1}, {0, 0}, {0, 0}, {0, 1}};
  qring_u2 o1, o2;
  EXPECT(qring_conjugate_pair(&draw, &free_joint, not_su2, &o1, &o2) == QRING_NOT_SPECIAL_UNITARY);

  qring_complex v[4];
  double tp = 0, tm = 0;
  EXPECT(qring_diagonalize(&free_joint, v, &tp, &tm) == QRING_OK);
  EXPECT(fabs(tp - pi) < 1e-12 && fabs(tm) < 1e-12);
}

static void test_kernels(void) {
  const qring_complex mi[4] = {{-1, 0}, {0, 0}, {0, 0}, {-1, 0}};
  const qring_complex s3[4] = {{0, 1}, {0, 0}, {0, 0}, {0, -1}};
  const qring_geometry g = {1.0, 1.0};
  qring_u2 u;
  qring_u2_from_matrix(mi, &u);
  qring_kernel* k = NULL;
  EXPECT(qring_kernel_create(&u, &g, QRING_KERNEL_AUTO, 0, &k) == QRING_OK);
  EXPECT(qring_kernel_family_of(k) == QRING_KERNEL_BOX);
  qring_complex val;
  const qring_complex euclid = {0.0, -0.1};
  EXPECT(qring_kernel_eval(k, 0.3, 0.6, euclid, 1e-15, 0, &val) == QRING_OK);
  double ref = 0;
  for (int n = 1; n < 200; ++n)
    ref += 2 * sin(n * pi * 0.3) * sin(n * pi * 0.6) * exp(-0.05 * n * n * pi * pi);
  EXPECT(fabs(val.re - ref) < 1e-12 && fabs(val.im) < 1e-12);
  const qring_complex real_time = {0.1, 0.0};
  EXPECT(qring_kernel_eval(k, 0.3, 0.6, real_time, 1e-15, 0, &val) == QRING_NON_CONVERGENT);
  qring_kernel_free(k);

  qring_crosscheck r;
  EXPECT(qring_kernel_crosscheck(&u, &g, 0.1, 8, 60, &r) == QRING_OK);
  EXPECT(r.family == QRING_KERNEL_BOX && r.max_deviation < 1e-8 && r.unimodular);

  qring_u2 generic;
  qring_u2_from_matrix(s3, &generic);
  EXPECT(qring_kernel_create(&generic, &g, QRING_KERNEL_AUTO, 0, &k) == QRING_UNSUPPORTED);
  EXPECT(qring_kernel_create(&generic, &g, QRING_KERNEL_SPECTRAL, 60, &k) == QRING_OK);
  EXPECT(qring_kernel_eval(k, 0.3, 0.6, euclid, 1e-15, 0, &val) == QRING_OK);
  qring_kernel_free(k);
}

int main(void) {
  EXPECT(strlen(qring_version()) > 0);
  test_u2();
  test_spectrum_and_inversion();
  test_two_point();
  test_kernels();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
