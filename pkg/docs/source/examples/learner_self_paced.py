# ---
# jupyter:
#   jupytext_format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Self-paced learner on the Towers of Hanoi

# Generate the 81 demonstrations, one from each configuration of the puzzle

import numpy as np

from pycirl.learner import LearnerState, SpirlConfig, batch_train, spirl_train
from pycirl.teacher import ExpertSpec, build_hanoi, expert_policy, generate_demos

env = build_hanoi()
starts = list(range(env.mdp.n_states))
env = env.with_initial_states(starts)
expert = expert_policy(env.mdp, env.w_star)
spec = ExpertSpec(env.w_star, starts, env.default_horizon)
pool = generate_demos(env.mdp, expert, spec, np.random.default_rng(0), env.absorbing)

# The self-paced learner starts with the easiest demonstration and grows its threshold by
# `delta_lambda` whenever its selection stops growing

init = LearnerState.initial(env.mdp.feature_dim, np.random.default_rng(1))
_, spirl = spirl_train(env.mdp, pool, init, SpirlConfig(delta_lambda=0.1))
init = LearnerState.initial(env.mdp.feature_dim, np.random.default_rng(1))
_, batch = batch_train(env.mdp, pool, init)
print(spirl.column("selected_count")[:10])
print(spirl.column("lambda_")[:10])
print(spirl.final_weights_digest, batch.final_weights_digest)
