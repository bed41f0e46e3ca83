/** Session state container.
 *
 * The server is the source of truth: the only way document state enters
 * the store is through `acceptDocument`, which enforces that the
 * displayed revision never goes backwards (stale responses are dropped).
 * Mutations are single-flight; interactions must check `beginMutation`.
 */

import type { SceneDocument } from "./types.js";
import type { Point } from "./geometry.js";

export interface DragState {
  nodeId: number;
  panelIndex: number;
  start: Point; // strip px where the drag began
  origin: Point; // node position (panel fractions) at drag start
  current: Point; // latest proposed position, already clamped
}

export interface UISessionState {
  sessionId: string | null;
  document: SceneDocument | null;
  revision: number;
  selectedNodeId: number | null;
  drag: DragState | null;
  busy: boolean;
  notice: string | null;
  panelUrls: string[];
  stripUrl: string | null;
}

export type Listener = (state: UISessionState) => void;

export class SessionStore {
  private state: UISessionState = {
    sessionId: null,
    document: null,
    revision: 0,
    selectedNodeId: null,
    drag: null,
    busy: false,
    notice: null,
    panelUrls: [],
    stripUrl: null,
  };

  private listeners: Listener[] = [];

  get current(): UISessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(partial: Partial<UISessionState>): void {
    this.state = { ...this.state, ...partial };
    this.emit();
  }

  startSession(sessionId: string, document: SceneDocument): void {
    this.state = {
      ...this.state,
      sessionId,
      document,
      revision: document.revision,
      selectedNodeId: null,
      drag: null,
      panelUrls: [],
      stripUrl: null,
    };
    this.emit();
  }

  /** Adopt a fetched document. Returns false (and changes nothing) if it
   * would move the displayed revision backwards. Selection survives when
   * the selected node still exists. */
  acceptDocument(document: SceneDocument): boolean {
    if (this.state.document !== null && document.revision < this.state.revision) {
      return false;
    }
    const selected = this.state.selectedNodeId;
    const survives =
      selected !== null && document.nodes.some((node) => node.id === selected);
    this.patch({
      document,
      revision: document.revision,
      selectedNodeId: survives ? selected : null,
    });
    return true;
  }

  setArtifacts(panelUrls: string[], stripUrl: string | null): void {
    this.patch({ panelUrls, stripUrl });
  }

  select(nodeId: number | null): void {
    this.patch({ selectedNodeId: nodeId });
  }

  /** Gate for the single-in-flight-mutation rule. */
  beginMutation(): boolean {
    if (this.state.busy) return false;
    this.patch({ busy: true, notice: null });
    return true;
  }

  endMutation(): void {
    this.patch({ busy: false });
  }

  setNotice(notice: string | null): void {
    this.patch({ notice });
  }

  beginDrag(drag: DragState): void {
    this.patch({ drag, selectedNodeId: drag.nodeId });
  }

  moveDrag(current: Point): void {
    if (this.state.drag === null) return;
    this.patch({ drag: { ...this.state.drag, current } });
  }

  endDrag(): DragState | null {
    const drag = this.state.drag;
    if (drag !== null) this.patch({ drag: null });
    return drag;
  }
}
