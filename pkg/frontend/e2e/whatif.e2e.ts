/** End-to-end what-if loop against a live service.
 *
 * Boot the service first, e.g.:
 *   cmokb serve src/cmokb/data/case_study.cmo.ttl --port 8765
 * then run:
 *   CMOKB_BASE_URL=http://127.0.0.1:8765 npm run e2e
 *
 * Drives the real ViewModel over the real HTTP client and checks the
 * select -> gap -> enroll -> undo -> reset loop, including the inline
 * prerequisite block.
 */

import { ApiClient } from '../src/api.js';
import { ViewModel } from '../src/viewmodel.js';

const BASE_URL = process.env.CMOKB_BASE_URL ?? 'http://127.0.0.1:8765';

let failures = 0;

function check(name: string, ok: boolean, detail = ''): void {
  if (ok) {
    console.log(`PASS ${name}`);
  } else {
    failures += 1;
    console.error(`FAIL ${name} ${detail}`);
  }
}

function localName(iri: string): string {
  return iri.slice(iri.lastIndexOf('#') + 1);
}

async function main(): Promise<void> {
  const api = new ApiClient(BASE_URL);
  const health = await api.health();
  check('service reachable', health.status === 'ok');

  const vm = new ViewModel(api, `e2e-${Date.now()}`);
  await vm.init();
  const louis = vm.current.profiles.find((p) => p.endsWith('LouisLe'));
  const sophie = vm.current.profiles.find((p) => p.endsWith('Sophie'));
  const m1405 = vm.current.occupations.find((o) => o.endsWith('M1405'));
  check('pickers list the case-study entities', Boolean(louis && sophie && m1405));
  if (!louis || !sophie || !m1405) {
    process.exit(1);
  }

  // select learner + occupation: the dashboard must show 3 missing
  await vm.selectProfile(louis);
  await vm.selectOccupation(m1405);
  const missing = (vm.current.gap?.missing ?? []).map((m) => localName(m.competence));
  check(
    'gap dashboard shows the three missing competencies',
    JSON.stringify(missing) ===
      JSON.stringify(['AnalyseDeDonnees01', 'MachineLearning01', 'Python_02']),
    JSON.stringify(missing),
  );
  const plan = vm.current.plans[0];
  check(
    'recommendation is the six-month training',
    plan !== undefined &&
      plan.steps.length === 1 &&
      localName(plan.steps[0]!.training) === 'FormationDS25' &&
      plan.totalDurationDays === 180,
    JSON.stringify(plan),
  );

  const before = vm.snapshot();

  // simulate enrollment: missing panel empties, timeline gains one step
  await vm.enroll(plan!.steps[0]!.training);
  check('missing panel is empty after enrollment', vm.current.gap?.missing.length === 0,
    JSON.stringify(vm.current.gap?.missing));
  check('timeline shows exactly one simulated action', vm.current.history.length === 1);
  check(
    'satisfied panel gained the covered competencies',
    (vm.current.gap?.satisfied ?? []).length === 3,
  );

  // undo restores the exact pre-action state
  await vm.undo();
  check('undo restores the serialized state', vm.snapshot() === before);

  // a second loop plus reset also restores it
  await vm.enroll(plan!.steps[0]!.training);
  await vm.reset();
  check('reset restores the serialized state', vm.snapshot() === before);

  // blocked enrollment surfaces inline on the training
  await vm.selectProfile(sophie);
  await vm.selectOccupation(m1405);
  const sophiePlan = vm.current.plans[0];
  if (sophiePlan && sophiePlan.steps.length > 0) {
    await vm.enroll(sophiePlan.steps[0]!.training);
    check(
      'unmet prerequisite is surfaced inline',
      vm.current.blocked !== null &&
        vm.current.blocked.unmetCompetences.some((u) => localName(u) === 'Python01'),
      JSON.stringify(vm.current.blocked),
    );
    check('blocked enrollment leaves the timeline untouched', vm.current.history.length === 0);
  } else {
    check('expected a recommendable training for the blocked case', false);
  }

  // the base knowledge base was never mutated
  const fresh = new ViewModel(api, `e2e-fresh-${Date.now()}`);
  await fresh.init();
  await fresh.selectProfile(louis);
  await fresh.selectOccupation(m1405);
  check(
    'base knowledge base unchanged after the session',
    fresh.current.gap?.missing.length === 3,
  );

  if (failures > 0) {
    console.error(`${failures} check(s) failed`);
    process.exit(1);
  }
  console.log('what-if loop verified against', BASE_URL);
}

main().catch((err) => {
  console.error('e2e aborted:', err);
  process.exit(1);
});
