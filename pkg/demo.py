"""
Quick demonstration of the JucysWorkbench library
"""

from jucys_workbench import Workbench
from jucys_workbench.operations import AffineBmwOperations, BmwOperations, TraceOperations
from jucys_workbench.scalar import BMW_GUARDS, sample_generic

print("=" * 70)
print("JUCYS WORKBENCH - Quick Demo")
print("=" * 70)

point = sample_generic(('q', 'nu'), BMW_GUARDS, seed=7, magnitude=97)
print(f"\n🎲 Generic point: {point}")

print("\n\n🏗️ Example 1: Close BMW_3 and Hecke_3")
bmw3 = BmwOperations.build_bmw(3, point)
hecke3 = BmwOperations.build_hecke(3, point)
print(f"dim BMW_3 = {bmw3.dimension}, dim H_3 = {hecke3.dimension}")

print("\n\n🔗 Example 2: Jucys-Murphy elements commute")
y2, y3 = bmw3.jm(2), bmw3.jm(3)
print(f"[y2, y3] = 0: {y2.commutator(y3).is_zero()}")

print("\n\n📋 Example 3: BMW identity suite")
report = BmwOperations.identity_suite_bmw(bmw3, trials=2, seed=7, magnitude=97)
print(f"{len(report.checks)} checks, ok = {report.ok}")

print("\n\n🌀 Example 4: Cyclotomic affine BMW quotient (n=2, d=2)")
affine = AffineBmwOperations.build_affine(2, 2, seed=3, magnitude=97)
print(f"dim = {affine.dimension} (expected {affine.expected_dim})")
print(f"central values: {affine.admissibility.to_json()}")

print("\n\n📐 Example 5: Markov trace tower")
ctx = TraceOperations.apply('build_tower', d=2, top=2, seed=3, magnitude=97)
trace_report = TraceOperations.apply('trace_property_suite', ctx=ctx, trials=1)
print(f"{len(trace_report.checks)} trace checks, ok = {trace_report.ok}")

print("\n\n📊 Example 6: Closure dimensions as a table")
print(Workbench(suite='bmw-identities', n=4, seed=7).dims_text('bmw'))

print("\n\n🧾 Example 7: Text report of a small run")
run = Workbench(suite='bmw-identities', n=2, trials=1, seed=7, magnitude=97).run()
print(run.render_text())

print("\n\n" + "=" * 70)
print("✅ All examples completed successfully!")
print("=" * 70)
