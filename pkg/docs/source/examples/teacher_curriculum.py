# ---
# jupyter:
#   jupytext_format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Curriculum teaching on a gridworld

# Build the gridworld and its expert, then generate one demonstration per start state

import numpy as np

from pycirl.learner import LearnerState, mu_policy_exact, train
from pycirl.teacher import (
    CurriculumContext,
    CurriculumStrategy,
    ExpertSpec,
    GridworldSpec,
    build_curriculum,
    build_gridworld,
    choose_demo_starts,
    expert_policy,
    generate_demos,
    schedule_minibatches,
)

rng = np.random.default_rng(0)
env = build_gridworld(GridworldSpec.preset("obstacle_wall", 5, 5, terminal_goals=True))
starts = choose_demo_starts(env, 25, rng)
env = env.with_initial_states(starts)
expert = expert_policy(env.mdp, env.w_star)
spec = ExpertSpec(env.w_star, starts, env.default_horizon)
pool = generate_demos(env.mdp, expert, spec, rng, env.absorbing)
expert_mu = mu_policy_exact(env.mdp, expert.matrix())

# Order the pool by reward and look at the first start states

context = CurriculumContext(env.mdp, env.w_star, seed=0)
curriculum = build_curriculum(pool, CurriculumStrategy.r_cirl(), context)
for index in curriculum.order[:5]:
    print(env.label(pool[index].start_state), curriculum.scores[index])

# Train a learner with the curriculum and with a random teacher from the same initial weights

for strategy in (CurriculumStrategy.r_cirl(), CurriculumStrategy.random(seed=0)):
    run_pool = pool.copy()
    curriculum = build_curriculum(run_pool, strategy, context)
    state = LearnerState.initial(env.mdp.feature_dim, np.random.default_rng(1))
    state, record = train(state, env.mdp, schedule_minibatches(curriculum, run_pool))
    mu = mu_policy_exact(env.mdp, state.policy(env.mdp).pi).mu
    print(strategy.name, np.linalg.norm(mu - expert_mu.mu))
