/** DOM rendering: every panel is a pure projection of the ViewState. */

import { ViewModel, ViewState } from './viewmodel.js';

function localName(iri: string): string {
  const hash = iri.lastIndexOf('#');
  return hash >= 0 ? iri.slice(hash + 1) : iri;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function option(value: string, label: string): HTMLOptionElement {
  const node = document.createElement('option');
  node.value = value;
  node.textContent = label;
  return node;
}

export function render(root: HTMLElement, vm: ViewModel, state: ViewState): void {
  root.textContent = '';

  const header = el('header');
  header.append(el('h1', undefined, 'Career what-if explorer'));
  if (state.loading) header.append(el('span', 'status', 'loading…'));
  if (state.error) header.append(el('span', 'status error', state.error));
  root.append(header);

  // --- pickers ---------------------------------------------------------
  const pickers = el('section', 'pickers');
  const profileSelect = el('select');
  profileSelect.append(option('', '— choose a learner —'));
  for (const profile of state.profiles) {
    profileSelect.append(option(profile, localName(profile)));
  }
  profileSelect.value = state.selectedProfile ?? '';
  profileSelect.onchange = () => void vm.selectProfile(profileSelect.value || null);

  const occupationSelect = el('select');
  occupationSelect.append(option('', '— choose a target occupation —'));
  for (const occupation of state.occupations) {
    occupationSelect.append(option(occupation, localName(occupation)));
  }
  occupationSelect.value = state.selectedOccupation ?? '';
  occupationSelect.onchange = () => void vm.selectOccupation(occupationSelect.value || null);

  pickers.append(labelled('Learner', profileSelect), labelled('Occupation', occupationSelect));
  root.append(pickers);

  // --- profile browser -------------------------------------------------
  if (state.selectedProfile) {
    const panel = el('section', 'panel');
    panel.append(el('h2', undefined, `Competencies of ${localName(state.selectedProfile)}`));
    const list = el('ul', 'competences');
    for (const row of state.competenceRows) {
      list.append(el('li', undefined,
        `${localName(row.competence)} — ${row.level ? localName(row.level) : 'level not recorded'}`));
    }
    if (state.competenceRows.length === 0) list.append(el('li', 'muted', 'none'));
    panel.append(list);
    root.append(panel);
  }

  // --- gap dashboard -----------------------------------------------------
  if (state.gap) {
    const panel = el('section', 'panel');
    panel.append(el('h2', undefined, `Gap for ${localName(state.gap.occupation)}`));
    panel.append(gapColumn('Missing', state.gap.missing.map((m) =>
      m.requiredLevel
        ? `${localName(m.competence)} (requires ${localName(m.requiredLevel)})`
        : localName(m.competence)), 'missing'));
    panel.append(gapColumn('Under-leveled', state.gap.underLeveled.map((u) =>
      `${localName(u.competence)}: ${localName(u.possessedLevel)} → ${localName(u.requiredLevel)}`),
      'under'));
    panel.append(gapColumn('Satisfied', state.gap.satisfied.map(localName), 'satisfied'));
    root.append(panel);
  }

  // --- recommendations ---------------------------------------------------
  if (state.gap && state.plans.length > 0) {
    const panel = el('section', 'panel');
    panel.append(el('h2', undefined, 'Recommended trainings'));
    const plan = state.plans[0];
    if (plan && plan.steps.length > 0) {
      const list = el('ul', 'plan');
      for (const step of plan.steps) {
        const item = el('li');
        item.append(el('span', undefined,
          `day ${step.startOffsetDays}: ${localName(step.training)} ` +
          `(covers ${step.covers.map(localName).join(', ')})`));
        const button = el('button', undefined, 'simulate enroll');
        button.onclick = () => void vm.enroll(step.training);
        item.append(button);
        if (state.blocked && state.blocked.training === step.training) {
          item.append(el('span', 'status error',
            `blocked — needs ${state.blocked.unmetCompetences.map(localName).join(', ')}`));
        }
        list.append(item);
      }
      panel.append(list);
      panel.append(el('p', 'muted',
        `total ${plan.totalDurationDays} days, cost ${plan.totalCost}`));
      if (plan.uncoverable.length > 0) {
        panel.append(el('p', 'status error',
          `no training covers: ${plan.uncoverable.map(localName).join(', ')}`));
      }
    } else {
      panel.append(el('p', 'muted', 'nothing to do — no missing competencies'));
    }
    root.append(panel);
  }

  // --- what-if timeline ----------------------------------------------------
  if (state.selectedProfile) {
    const panel = el('section', 'panel');
    panel.append(el('h2', undefined, 'What-if timeline'));
    const list = el('ol', 'timeline');
    for (const action of state.history) {
      list.append(el('li', undefined, `enrolled in ${localName(action.training)}`));
    }
    if (state.history.length === 0) list.append(el('li', 'muted', 'no simulated actions'));
    panel.append(list);
    const undoButton = el('button', undefined, 'undo');
    undoButton.disabled = state.history.length === 0;
    undoButton.onclick = () => void vm.undo();
    const resetButton = el('button', undefined, 'reset');
    resetButton.disabled = state.history.length === 0;
    resetButton.onclick = () => void vm.reset();
    panel.append(undoButton, resetButton);
    root.append(panel);
  }
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el('label');
  wrap.append(el('span', undefined, text), control);
  return wrap;
}

function gapColumn(title: string, entries: string[], className: string): HTMLElement {
  const column = el('div', `gap-column ${className}`);
  column.append(el('h3', undefined, `${title} (${entries.length})`));
  const list = el('ul');
  for (const entry of entries) list.append(el('li', undefined, entry));
  if (entries.length === 0) list.append(el('li', 'muted', 'none'));
  column.append(list);
  return column;
}
