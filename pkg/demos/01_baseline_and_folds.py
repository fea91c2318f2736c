"""Loading data, majority baseline, and reproducible fold plans.

The benchmark problem is tiny (171 molecules) and imbalanced (115 non-toxic
vs 56 toxic), so the first number to anchor on is the majority baseline:
any model worth keeping must beat 67.25% accuracy.
"""

import numpy as np

from gafs import load_csv, majority_baseline, make_folds
from gafs.synth import toxicity_shaped_dataset, write_csv

# Stand-in with the benchmark's exact shape; swap in the real descriptor CSV
# (UCI "Toxicity") by pointing load_csv at it.
write_csv(toxicity_shaped_dataset(seed=0), "/tmp/toxicity_demo.csv")
data = load_csv("/tmp/toxicity_demo.csv")

print(f"{data.n_instances} instances x {data.n_features} features")
print(f"classes: {data.class_names}, counts: {data.class_counts()}")
print(f"majority baseline: {majority_baseline(data):.4f}")

# Stratified 10-fold plan, the workhorse of wrapper fitness evaluation.
plan = make_folds(data, k=10, seed=42, stratified=True)
print("\n10-fold sizes:", np.bincount(plan.assignments).tolist())
for fold in range(3):
    members = plan.test_indices(fold)
    toxic = int(np.sum(data.labels[members]))
    print(f"  fold {fold}: {len(members)} instances, {toxic} toxic")

# The 100-fold outer plan leaves only 1-2 instances out per fold, which is
# what makes nested validation cheap enough to repeat.
outer = make_folds(data, k=100, seed=42, stratified=False)
sizes = np.bincount(outer.assignments)
print(f"\n100-fold plan: {np.sum(sizes == 2)} folds of 2, "
      f"{np.sum(sizes == 1)} folds of 1")

# Same seed, same plan, byte for byte.
again = make_folds(data, k=10, seed=42, stratified=True)
print("\ndeterministic:", (plan.assignments == again.assignments).all())
