import { escapeHtml } from "../format.js";

/** Crystal-ball modal. The prompt is rendered verbatim: its negation stack
 * is the protocol's state and must not be paraphrased by the display. */
export function renderDialogue(argumentId: string, prompt: string): string {
  return `<div class="crystal-ball-dialogue" data-argument="${escapeHtml(argumentId)}">
  <blockquote class="crystal-ball-prompt">${escapeHtml(prompt)}</blockquote>
  <form class="qualification-form">
    <input name="description" placeholder="What could explain this?" required />
    <input name="probability" type="number" min="0" max="1" step="0.01" required />
    <select name="impact">
      <option value="undercut">undercut</option>
      <option value="rebut">rebut</option>
    </select>
    <input name="target" placeholder="rebut target labels (comma separated)" />
    <button type="submit">submit qualification</button>
    <button type="button" class="pass-button">pass</button>
  </form>
</div>`;
}
