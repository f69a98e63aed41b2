use crate::product::ProductGraph;

/// Strongly connected components of the positive-probability edge relation.
///
/// Returns `(component id per node, number of components)`. Iterative
/// Tarjan; components are numbered in completion order, which is a reverse
/// topological order of the condensation.
pub fn strongly_connected(g: &ProductGraph) -> (Vec<usize>, usize) {
    const UNVISITED: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            let edges = g.edges(v);
            if *i < edges.len() {
                let w = edges[*i].target;
                *i += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    (comp, count)
}

/// Components with no edge leaving them: the recurrent classes of the chain.
pub fn recurrent_classes(g: &ProductGraph) -> Vec<Vec<usize>> {
    let (comp, count) = strongly_connected(g);
    let mut closed = vec![true; count];
    for q in 0..g.len() {
        if g.edges(q).iter().any(|e| comp[e.target] != comp[q]) {
            closed[comp[q]] = false;
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); count];
    for q in 0..g.len() {
        if closed[comp[q]] {
            classes[comp[q]].push(q);
        }
    }
    let mut classes: Vec<Vec<usize>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort_by_key(|c| c[0]);
    classes
}
